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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bighead/circuit.hpp"

namespace bighead {

struct AmplitudeRow {
    /// Open-qubit bits, lowest open qubit id first.
    std::string s2;
    /// All n bits in layout order with s1 and s2 spliced in.
    std::string bitstring;
    cplx amplitude;
    double probability = 0.0;
};

struct AmplitudeTable {
    std::string circuit_hash;
    std::string s1;
    /// Ascending.
    std::vector<int> open_qubits;
    int n = 0;
    /// Layout qubit ids, ascending; fixes which bitstring positions are open.
    std::vector<int> qubits;
    std::vector<AmplitudeRow> rows;

    int n2() const {
        return static_cast<int>(open_qubits.size());
    }
};

/// Full bitstring for closed bits `s1` (layout order) and open bits `s2`.
std::string splice_bitstring(const QubitLayout &layout, const std::vector<int> &open_qubits, const std::string &s1,
                             const std::string &s2);

/// Binary string of `value` with `width` digits, most significant first.
std::string to_bits(std::uint64_t value, int width);

/// Tab-separated rows `bitstring amp_re amp_im probability` after '#' header lines.
void write_table_tsv(std::ostream &os, const AmplitudeTable &t);
AmplitudeTable read_table_tsv(std::istream &is);

std::vector<double> probabilities(const AmplitudeTable &t);

}  // namespace bighead
