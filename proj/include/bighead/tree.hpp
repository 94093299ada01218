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
#include <optional>
#include <set>
#include <vector>

#include "bighead/network.hpp"
#include "json.hpp"

namespace bighead {

/// Pairwise contraction of tree nodes `lhs` and `rhs` into `out_id`.
struct ContractionStep {
    int lhs = 0;
    int rhs = 0;
    int out_id = 0;
    bool operator==(const ContractionStep &) const = default;
};

/// Tree ids: leaf k is `leaves[k]` (a network node id), step i produces id
/// leaves.size() + i. Steps are in post-order, left child first.
struct ContractionTree {
    std::vector<int> leaves;
    std::vector<ContractionStep> steps;
    /// Roots of the two first-cut children; a side is absent when it holds no tensors.
    std::optional<int> head_root;
    std::optional<int> tail_root;

    int leaf_count() const {
        return static_cast<int>(leaves.size());
    }
    int size() const {
        return leaf_count() + static_cast<int>(steps.size());
    }
    int root() const {
        return steps.empty() ? 0 : steps.back().out_id;
    }
    bool is_leaf(int id) const {
        return id < leaf_count();
    }
    const ContractionStep &step_of(int id) const {
        return steps[static_cast<std::size_t>(id - leaf_count())];
    }
    /// Step index joining head and tail, when both sides exist.
    std::optional<int> first_cut() const;
    /// Network node ids under `id`, ascending.
    std::vector<int> leaves_under(int id) const;
    /// Step indices of the subtree rooted at `id`, in execution order.
    std::vector<int> steps_under(int id) const;

    bool operator==(const ContractionTree &) const = default;
};

/// Builds a tree from arbitrary join calls, then renumbers to canonical post-order.
class TreeBuilder {
   public:
    TreeBuilder() = default;
    /// Handle for network node `node`.
    int leaf(int node);
    int join(int a, int b);
    ContractionTree finish(int root, std::optional<int> head = std::nullopt,
                           std::optional<int> tail = std::nullopt) const;

   private:
    struct Entry {
        int node = -1;
        int left = -1;
        int right = -1;
    };
    std::vector<Entry> entries_;
};

/// Builds a tree from a canonical one so that subtrees can be rewired.
TreeBuilder to_builder(const ContractionTree &tree, std::vector<int> *handles);

struct StepCost {
    int n_a = 0;
    int n_b = 0;
    int n_ab = 0;

    int log2_time() const {
        return n_a + n_b + n_ab;
    }
    int log2_space() const {
        return n_a + n_b;
    }
};

struct Complexity {
    /// One entry per step considered, in execution order.
    std::vector<StepCost> per_step;
    /// Sum of 2^(n_A+n_B+n_AB) over steps.
    double tc = 0.0;
    /// Exact integer tc; saturates at UINT64_MAX (see tc_overflow).
    std::uint64_t tc_exact = 0;
    bool tc_overflow = false;
    /// log2 of the largest tensor, leaves included.
    int sc = 0;

    double log2_tc() const;
};

/// Boundary index sets (sorted) for every tree id, with `removed` indices
/// dropped everywhere.
std::vector<std::vector<int>> boundary_sets(const TensorNetwork &tn, const ContractionTree &tree,
                                            const std::set<int> &removed = {});

/// Costs of every step, or of the steps under `subtree` only.
Complexity complexity_of(const TensorNetwork &tn, const ContractionTree &tree, const std::set<int> &removed = {},
                         std::optional<int> subtree = std::nullopt);

/// Throws Error(tree_network_mismatch) unless the tree is a valid full tree over tn.
void check_tree(const TensorNetwork &tn, const ContractionTree &tree);

/// Checks the first-cut contract: open-index nodes under the tail side and
/// projection-only nodes under the head side.
void check_first_cut(const TensorNetwork &tn, const ContractionTree &tree);

/// Number of indices crossing the first cut (0 when a side is absent).
int cut_size(const TensorNetwork &tn, const ContractionTree &tree);

nlohmann::json tree_to_json(const ContractionTree &tree);
ContractionTree tree_from_json(const nlohmann::json &j);

}  // namespace bighead
