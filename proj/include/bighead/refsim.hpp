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

#include <string_view>
#include <vector>

#include "bighead/circuit.hpp"
#include "bighead/table.hpp"

namespace bighead {

/// Full state over the layout; qubit at layout position k is bit (n-1-k) of the index.
struct StateVector {
    int n = 0;
    std::vector<cplx> data;
};

struct SimOptions {
    int max_qubits = 26;
};

StateVector simulate(const Circuit &c, const SimOptions &opts = {});

/// Applies one validated gate in place.
void apply_gate(StateVector &sv, const QubitLayout &layout, const GateSpec &g);

double norm_squared(const StateVector &sv);

/// Amplitude of a full n-character 0/1 bitstring in layout order.
cplx amplitude(const StateVector &sv, std::string_view s);

/// Table for fixed closed bits `s1` enumerating every assignment of `open_qubits`.
AmplitudeTable oracle_table(const Circuit &c, const StateVector &sv, const std::vector<int> &open_qubits,
                            const std::string &s1);

}  // namespace bighead
