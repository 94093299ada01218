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

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bighead/network.hpp"
#include "bighead/plan.hpp"
#include "bighead/table.hpp"
#include "bighead/tensor.hpp"
#include "bighead/tree.hpp"

namespace bighead {

enum class Precision : std::uint8_t { dbl = 0, single = 1 };
enum class Reduction : std::uint8_t {
    /// Pairwise sums over aligned power-of-two slice blocks: any split of the
    /// slice range reduces to the same bits.
    fixed = 0,
    /// Accumulation in completion order.
    free = 1,
};

const char *precision_name(Precision p);
const char *reduction_name(Reduction r);

struct EngineStats {
    std::atomic<std::uint64_t> head_contractions{0};
    std::atomic<std::uint64_t> tail_contractions{0};
    std::atomic<std::uint64_t> multiplications{0};
};

struct RunOptions {
    Precision precision = Precision::dbl;
    Reduction reduction = Reduction::fixed;
    int threads = 1;
};

/// Partial sum of head contractions over slice assignments [start, start+size).
struct HeadBlock {
    std::uint64_t start = 0;
    std::uint64_t size = 0;
    std::vector<cplx> data;
};

struct HeadVector {
    std::string s1;
    /// Cut indices, ascending; data is indexed by them, first index most significant.
    std::vector<int> cut_indices;
    std::uint64_t provenance = 0;
    Reduction mode = Reduction::fixed;
    Precision precision = Precision::dbl;
    std::uint64_t range_begin = 0;
    std::uint64_t range_end = 0;
    std::uint64_t total = 1;
    std::vector<HeadBlock> blocks;

    int n_c() const {
        return static_cast<int>(cut_indices.size());
    }
    bool complete() const {
        return range_begin == 0 && range_end == total && blocks.size() == 1;
    }
    /// The summed vector; requires complete().
    const std::vector<cplx> &data() const;
};

/// Contracts the whole tree (or the subtree at `subtree`) with `pins` fixed at
/// the leaves. Adds the multiplication count to *mults.
template <typename T>
Tensor<T> contract_tree(const TensorNetwork &tn, const ContractionTree &tree, const std::map<int, int> &pins,
                        std::optional<int> subtree = std::nullopt, std::uint64_t *mults = nullptr) {
    if (tree.size() == 0) {
        throw Error(Errc::shape_mismatch, "empty contraction tree");
    }
    const int root = subtree ? *subtree : tree.root();
    auto load_leaf = [&](int id) {
        const auto &node = tn.nodes.at(static_cast<std::size_t>(tree.leaves.at(static_cast<std::size_t>(id))));
        Tensor<T> t = tensor_cast<T>(node.tensor());
        for (int i : node.indices) {
            auto it = pins.find(i);
            if (it != pins.end()) {
                t = pin_index(t, i, it->second);
            }
        }
        return t;
    };
    if (tree.is_leaf(root)) {
        return load_leaf(root);
    }
    std::vector<std::optional<Tensor<T>>> slot(static_cast<std::size_t>(tree.size()));
    for (int s : tree.steps_under(root)) {
        const auto &st = tree.steps[static_cast<std::size_t>(s)];
        auto take = [&](int id) {
            if (tree.is_leaf(id)) {
                return load_leaf(id);
            }
            auto &opt = slot[static_cast<std::size_t>(id)];
            if (!opt) {
                throw Error(Errc::shape_mismatch, "tree step consumed before it was produced");
            }
            Tensor<T> t = std::move(*opt);
            opt.reset();
            return t;
        };
        Tensor<T> a = take(st.lhs);
        Tensor<T> b = take(st.rhs);
        slot[static_cast<std::size_t>(st.out_id)] = contract_pair(a, b, mults);
    }
    return std::move(*slot[static_cast<std::size_t>(root)]);
}

/// Head vector for the plan's network (s1 is baked into the network), summed
/// over slice assignments in `range` (default: all).
HeadVector compute_head_vector(const TensorNetwork &tn, const ContractionPlan &plan, const RunOptions &opts,
                               std::optional<std::pair<std::uint64_t, std::uint64_t>> range = std::nullopt,
                               EngineStats *stats = nullptr);

/// Open indices pinned per tail chunk so the tail object stays under plan.tail_space.
int tail_chunk_bits(const TensorNetwork &tn, const ContractionPlan &plan);

/// All 2^n2 amplitudes: contracts the tail (in chunks) and takes inner products with the head.
AmplitudeTable compute_tail_amplitudes(const TensorNetwork &tn, const ContractionPlan &plan, const HeadVector &head,
                                       const RunOptions &opts, EngineStats *stats = nullptr);

/// Combines partials covering the full slice range.
HeadVector reduce_partials(std::vector<HeadVector> partials);

/// Expected head provenance for a plan and s1.
std::uint64_t head_provenance(const ContractionPlan &plan, const std::string &s1);

/// Floating-point operation estimate for complex arithmetic: 8 * tc.
double flop_estimate(const Complexity &cx);

inline constexpr int kPartialFormatVersion = 1;

/// Little-endian partial file: magic "BHHV", version, provenance, n_c, range,
/// total, mode, precision, s1, then dyadic blocks of complex doubles.
void write_partial(std::ostream &os, const HeadVector &hv);
HeadVector read_partial(std::istream &is);

}  // namespace bighead
