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
#include <string_view>
#include <utility>
#include <vector>

#include "bighead/circuit.hpp"

namespace bighead {

struct GridCoord {
    int row;
    int col;
};

/// Couplers of one Sycamore-style interaction layer ('A'..'D') over a set of
/// grid sites; returned as pairs of positions into `sites`, lower first.
std::vector<std::pair<int, int>> grid_layer_pairs(const std::vector<GridCoord> &sites, char layer);

/// The 53 working qubits of the Sycamore chip, numbered row-major as in the
/// public supremacy circuit files.
std::vector<GridCoord> sycamore_sites();

struct RandomCircuitOptions {
    /// Pattern of two-qubit layers, repeated cyclically.
    std::string_view sequence = "ABCDCDAB";
    /// Draw FSIM angles near (pi/2, pi/6) like the hardware; otherwise uniform in [0, 2pi).
    bool sycamore_angles = false;
    /// Trailing half cycle of single-qubit gates.
    bool final_layer = true;
};

/// Random circuit on `sites`: each cycle is a layer of random sqrt(X)/sqrt(Y)/sqrt(W)
/// gates (never repeating a qubit's previous choice) followed by FSIM gates on the
/// layer's couplers.
Circuit random_grid_circuit(const std::vector<GridCoord> &sites, int cycles, std::uint64_t seed,
                            const RandomCircuitOptions &opts = {});

/// Places n qubits row-major on a near-square grid and calls random_grid_circuit.
Circuit random_circuit(int n, int cycles, std::uint64_t seed, const RandomCircuitOptions &opts = {});

/// Same structure as the published n53 circuits with fresh random gate draws.
Circuit sycamore_circuit(int cycles, std::uint64_t seed, std::string_view sequence = "ABCDCDAB");

}  // namespace bighead
