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

#include <optional>
#include <vector>

#include "bighead/network.hpp"
#include "bighead/tree.hpp"

namespace bighead {

struct SlicePlan {
    std::vector<int> sliced_indices;
    Complexity per_subtask;
    /// subtask_count * per_subtask.tc / unsliced tc.
    double overhead = 1.0;

    int n_e() const {
        return static_cast<int>(sliced_indices.size());
    }
    std::uint64_t subtask_count() const {
        return std::uint64_t{1} << sliced_indices.size();
    }
};

enum class SliceScope {
    /// Cap applies to every tensor of the tree.
    whole_tree,
    /// Cap applies to the head subtree; only head-internal indices are sliced.
    head,
};

struct SliceOptions {
    int target_space = 30;
    bool reconfigure = false;
    SliceScope scope = SliceScope::whole_tree;
    /// Largest frontier rebuilt exactly during reconfiguration.
    int reconfigure_leaves = 6;
};

struct SliceResult {
    SlicePlan plan;
    ContractionTree tree;
};

SliceResult select_slices(const TensorNetwork &tn, const ContractionTree &tree, const SliceOptions &opts);

/// Max relative deviation between the sum over all slice assignments and the
/// unsliced contraction.
double sliced_equivalence_check(const TensorNetwork &tn, const ContractionTree &tree, const SlicePlan &plan);

}  // namespace bighead
