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
#include <set>
#include <vector>

#include "bighead/network.hpp"
#include "bighead/tree.hpp"

namespace bighead::detail {

// Exact optimum over up to 2^k subsets: cost(S) = min over splits of children costs
// plus the join time. Intermediate ranks may not exceed `rank_cap`.
struct SubsetPlan {
    std::vector<double> cost;
    std::vector<int> split;
    std::vector<std::vector<int>> boundary;
};

SubsetPlan optimize_pieces(const std::vector<std::vector<int>> &pieces, int rank_cap);

/// Rebuilds the subtree at `x` optimally over its frontier of at most
/// `max_pieces` pieces (expanding the largest first). Returns nothing unless
/// the new subtree is strictly cheaper and keeps every rank within `rank_cap`.
/// Ranks and times ignore the indices in `removed`.
std::optional<ContractionTree> reconfigure_at(const TensorNetwork &tn, const ContractionTree &tree, int x,
                                              const std::set<int> &removed, int max_pieces, int rank_cap);

/// Sweeps the tree, costliest steps first, rebuilding each step's frontier of
/// up to `max_pieces` pieces optimally. Ranks stay within `rank_cap` (default:
/// the current largest rank). The root is kept when the tree has a first cut.
ContractionTree refine_tree(const TensorNetwork &tn, const ContractionTree &tree, const std::set<int> &removed,
                            int max_pieces, int rounds, std::optional<int> rank_cap);

}  // namespace bighead::detail
