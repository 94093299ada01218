// Copyright 2026 The Bighead Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bighead/errors.hpp"

#include <cstdio>

#include "bighead/hash.hpp"

namespace bighead {

const char *errc_name(Errc code) {
    switch (code) {
        case Errc::unknown_gate: return "UnknownGate";
        case Errc::qubit_out_of_range: return "QubitOutOfRange";
        case Errc::moment_collision: return "MomentCollision";
        case Errc::malformed_line: return "MalformedLine";
        case Errc::invalid_circuit: return "InvalidCircuit";
        case Errc::config_mismatch: return "ConfigMismatch";
        case Errc::tree_network_mismatch: return "TreeNetworkMismatch";
        case Errc::infeasible_cut: return "InfeasibleCut";
        case Errc::budget_exhausted: return "BudgetExhausted";
        case Errc::cannot_reach_cap: return "CannotReachCap";
        case Errc::shape_mismatch: return "ShapeMismatch";
        case Errc::range_out_of_bounds: return "RangeOutOfBounds";
        case Errc::range_gap: return "RangeGap";
        case Errc::range_overlap: return "RangeOverlap";
        case Errc::provenance_mismatch: return "ProvenanceMismatch";
        case Errc::empty_input: return "EmptyInput";
        case Errc::not_sorted: return "NotSorted";
        case Errc::incomplete_enumeration: return "IncompleteEnumeration";
        case Errc::zero_marginal: return "ZeroMarginal";
        case Errc::too_many_qubits: return "TooManyQubits";
        case Errc::length_mismatch: return "LengthMismatch";
        case Errc::io_error: return "IoError";
        case Errc::format_error: return "FormatError";
    }
    return "Unknown";
}

int exit_code_for(Errc code) {
    switch (code) {
        case Errc::infeasible_cut:
        case Errc::budget_exhausted:
        case Errc::cannot_reach_cap:
            return 3;
        case Errc::shape_mismatch:
            return 4;
        default:
            return 2;
    }
}

std::string to_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace bighead
