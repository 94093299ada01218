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

#pragma once

#include <stdexcept>
#include <string>

namespace bighead {

enum class Errc {
    // circuit input
    unknown_gate,
    qubit_out_of_range,
    moment_collision,
    malformed_line,
    invalid_circuit,
    // network / tree
    config_mismatch,
    tree_network_mismatch,
    // order search
    infeasible_cut,
    budget_exhausted,
    cannot_reach_cap,
    // engine
    shape_mismatch,
    range_out_of_bounds,
    range_gap,
    range_overlap,
    provenance_mismatch,
    // analytics
    empty_input,
    not_sorted,
    incomplete_enumeration,
    zero_marginal,
    // reference simulator
    too_many_qubits,
    length_mismatch,
    // files
    io_error,
    format_error,
};

const char *errc_name(Errc code);

/// Process exit code for an error: 2 input error, 3 search-budget failure,
/// 4 internal invariant violation.
int exit_code_for(Errc code);

class Error : public std::runtime_error {
   public:
    Error(Errc code, const std::string &what) : std::runtime_error(what), code_(code) {
    }
    Errc code() const noexcept {
        return code_;
    }

   private:
    Errc code_;
};

/// Parse error with the 1-based source line (0 when not applicable).
class CircuitError : public Error {
   public:
    CircuitError(Errc code, int line, const std::string &what)
        : Error(code, "line " + std::to_string(line) + ": " + what), line_(line) {
    }
    int line() const noexcept {
        return line_;
    }

   private:
    int line_;
};

}  // namespace bighead
