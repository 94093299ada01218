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

#include "bighead/refsim.hpp"

#include "bighead/errors.hpp"

namespace bighead {

StateVector simulate(const Circuit &c, const SimOptions &opts) {
    const int n = c.num_qubits();
    if (n > opts.max_qubits) {
        throw Error(Errc::too_many_qubits,
                    std::to_string(n) + " qubits exceeds the cap of " + std::to_string(opts.max_qubits));
    }
    StateVector sv{n, std::vector<cplx>(std::size_t{1} << n)};
    sv.data[0] = 1.0;
    for (const auto &moment : c.moments) {
        for (const auto &g : moment) {
            apply_gate(sv, c.layout, g);
        }
    }
    return sv;
}

void apply_gate(StateVector &sv, const QubitLayout &layout, const GateSpec &g) {
    const UnitaryMatrix u = gate_matrix(g);
    const std::size_t size = sv.data.size();
    if (g.targets.size() == 1) {
        const std::size_t bit = std::size_t{1} << (sv.n - 1 - layout.position(g.targets[0]));
        for (std::size_t i = 0; i < size; ++i) {
            if ((i & bit) != 0) {
                continue;
            }
            const cplx a0 = sv.data[i];
            const cplx a1 = sv.data[i | bit];
            sv.data[i] = u(0, 0) * a0 + u(0, 1) * a1;
            sv.data[i | bit] = u(1, 0) * a0 + u(1, 1) * a1;
        }
        return;
    }
    const std::size_t ba = std::size_t{1} << (sv.n - 1 - layout.position(g.targets[0]));
    const std::size_t bb = std::size_t{1} << (sv.n - 1 - layout.position(g.targets[1]));
    for (std::size_t i = 0; i < size; ++i) {
        if ((i & (ba | bb)) != 0) {
            continue;
        }
        const std::size_t idx[4] = {i, i | bb, i | ba, i | ba | bb};
        cplx in[4];
        for (int k = 0; k < 4; ++k) {
            in[k] = sv.data[idx[k]];
        }
        for (int r = 0; r < 4; ++r) {
            cplx acc = 0.0;
            for (int k = 0; k < 4; ++k) {
                acc += u(r, k) * in[k];
            }
            sv.data[idx[r]] = acc;
        }
    }
}

double norm_squared(const StateVector &sv) {
    double s = 0.0;
    for (const auto &x : sv.data) {
        s += std::norm(x);
    }
    return s;
}

cplx amplitude(const StateVector &sv, std::string_view s) {
    if (static_cast<int>(s.size()) != sv.n) {
        throw Error(Errc::length_mismatch,
                    "bitstring has " + std::to_string(s.size()) + " bits, state has " + std::to_string(sv.n));
    }
    std::size_t idx = 0;
    for (char ch : s) {
        if (ch != '0' && ch != '1') {
            throw Error(Errc::length_mismatch, "bitstring must contain only 0 and 1");
        }
        idx = (idx << 1) | static_cast<std::size_t>(ch - '0');
    }
    return sv.data[idx];
}

AmplitudeTable oracle_table(const Circuit &c, const StateVector &sv, const std::vector<int> &open_qubits,
                            const std::string &s1) {
    AmplitudeTable t;
    t.circuit_hash = circuit_hash(c);
    t.s1 = s1;
    t.open_qubits = open_qubits;
    t.n = c.num_qubits();
    t.qubits = c.layout.ids;
    if (static_cast<int>(s1.size() + open_qubits.size()) != t.n) {
        throw Error(Errc::config_mismatch, "s1 and open qubits do not cover the layout");
    }
    const int n2 = t.n2();
    t.rows.reserve(std::size_t{1} << n2);
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << n2); ++v) {
        AmplitudeRow row;
        row.s2 = to_bits(v, n2);
        row.bitstring = splice_bitstring(c.layout, open_qubits, s1, row.s2);
        row.amplitude = amplitude(sv, row.bitstring);
        row.probability = std::norm(row.amplitude);
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace bighead
