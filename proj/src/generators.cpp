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

#include "bighead/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "bighead/errors.hpp"

namespace bighead {

namespace {

struct LayerSpec {
    int col_offset;
    bool vertical;
};

LayerSpec layer_spec(char layer) {
    switch (layer) {
        case 'A': return {0, true};
        case 'B': return {1, true};
        case 'C': return {1, false};
        case 'D': return {0, false};
        default: throw Error(Errc::invalid_circuit, std::string("unknown coupler layer '") + layer + "'");
    }
}

int mod2(int x) {
    return ((x % 2) + 2) % 2;
}

}  // namespace

std::vector<std::pair<int, int>> grid_layer_pairs(const std::vector<GridCoord> &sites, char layer) {
    const LayerSpec spec = layer_spec(layer);
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t i = 0; i < sites.size(); ++i) {
        for (std::size_t j = i + 1; j < sites.size(); ++j) {
            GridCoord a = sites[i];
            GridCoord b = sites[j];
            if (spec.vertical) {
                std::swap(a.row, a.col);
                std::swap(b.row, b.col);
            }
            if (std::tie(b.row, b.col) < std::tie(a.row, a.col)) {
                std::swap(a, b);
            }
            if (a.row != b.row || b.col != a.col + 1) {
                continue;
            }
            const int r = mod2(a.row);
            const int c = mod2(a.col - spec.col_offset);
            // Staggered unit cell: (0, 0) or (1, 1).
            if ((r == 0 && c == 0) || (r == 1 && c == 1)) {
                pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
            }
        }
    }
    return pairs;
}

std::vector<GridCoord> sycamore_sites() {
    // Row extents of the 54-site chip; (3, 2) is the inoperable qubit.
    static const int spans[10][2] = {{5, 6}, {4, 7}, {3, 8}, {2, 9}, {1, 9}, {0, 8}, {1, 7}, {2, 6}, {3, 5}, {4, 4}};
    std::vector<GridCoord> sites;
    for (int r = 0; r < 10; ++r) {
        for (int c = spans[r][0]; c <= spans[r][1]; ++c) {
            if (r == 3 && c == 2) {
                continue;
            }
            sites.push_back({r, c});
        }
    }
    return sites;
}

Circuit random_grid_circuit(const std::vector<GridCoord> &sites, int cycles, std::uint64_t seed,
                            const RandomCircuitOptions &opts) {
    std::mt19937_64 rng(seed);
    auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    const int n = static_cast<int>(sites.size());
    Circuit c;
    c.layout = QubitLayout::contiguous(n);
    c.metadata.sequence = std::string(opts.sequence);
    c.metadata.seed = std::to_string(seed);

    std::vector<std::vector<std::pair<int, int>>> layers(4);
    for (int k = 0; k < 4; ++k) {
        layers[static_cast<std::size_t>(k)] = grid_layer_pairs(sites, static_cast<char>('A' + k));
    }
    for (char layer : opts.sequence) {
        if (layer < 'A' || layer > 'D') {
            throw Error(Errc::invalid_circuit, std::string("unknown coupler layer '") + layer + "'");
        }
    }
    std::vector<int> previous(static_cast<std::size_t>(n), -1);
    auto single_layer = [&]() {
        std::vector<GateSpec> moment;
        for (int q = 0; q < n; ++q) {
            int choice = static_cast<int>(rng() % 3);
            if (choice == previous[static_cast<std::size_t>(q)]) {
                choice = (choice + 1 + static_cast<int>(rng() % 2)) % 3;
            }
            previous[static_cast<std::size_t>(q)] = choice;
            static const GateKind kinds[3] = {GateKind::sqrt_x, GateKind::sqrt_y, GateKind::sqrt_w};
            moment.push_back(GateSpec{kinds[choice], {q}, {}, 0});
        }
        return moment;
    };
    const double two_pi = 2.0 * std::numbers::pi;
    for (int cycle = 0; cycle < cycles; ++cycle) {
        c.moments.push_back(single_layer());
        const char layer = opts.sequence.empty() ? 'A' : opts.sequence[static_cast<std::size_t>(cycle) % opts.sequence.size()];
        std::vector<GateSpec> moment;
        for (auto [a, b] : layers[static_cast<std::size_t>(layer - 'A')]) {
            double theta = 0;
            double phi = 0;
            if (opts.sycamore_angles) {
                theta = std::numbers::pi / 2 + 0.1 * (uniform() - 0.5);
                phi = std::numbers::pi / 6 + 0.1 * (uniform() - 0.5);
            } else {
                theta = two_pi * uniform();
                phi = two_pi * uniform();
            }
            moment.push_back(GateSpec{GateKind::fsim, {a, b}, {theta, phi}, 0});
        }
        if (!moment.empty()) {
            c.moments.push_back(std::move(moment));
        }
    }
    if (opts.final_layer) {
        c.moments.push_back(single_layer());
    }
    return c;
}

Circuit random_circuit(int n, int cycles, std::uint64_t seed, const RandomCircuitOptions &opts) {
    if (n < 1) {
        throw Error(Errc::invalid_circuit, "random_circuit needs at least one qubit");
    }
    const int rows = std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(n)))));
    const int cols = (n + rows - 1) / rows;
    std::vector<GridCoord> sites;
    for (int q = 0; q < n; ++q) {
        sites.push_back({q / cols, q % cols});
    }
    return random_grid_circuit(sites, cycles, seed, opts);
}

Circuit sycamore_circuit(int cycles, std::uint64_t seed, std::string_view sequence) {
    RandomCircuitOptions opts;
    opts.sequence = sequence;
    opts.sycamore_angles = true;
    Circuit c = random_grid_circuit(sycamore_sites(), cycles, seed, opts);
    c.declared_cycles = cycles;
    c.metadata.source = "sycamore_n53_m" + std::to_string(cycles) + "_synthetic";
    return c;
}

}  // namespace bighead
