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
#include <string>
#include <vector>

#include "bighead/circuit.hpp"
#include "bighead/errors.hpp"
#include "bighead/network.hpp"
#include "bighead/tree.hpp"

namespace bighead {

struct PartitionConstraints {
    /// log2 cap on any tensor, open legs included.
    int max_space = 60;
    /// log2 cap on any single pairwise contraction.
    int max_time = 80;
    int leaf_limit = 60;
    /// Informational; the network's open legs decide the tail.
    std::vector<int> tail_open_qubits;
    std::optional<int> max_cut;
    std::uint64_t rng_seed = 0;
    /// Bipartition restarts per round, and overall.
    int restarts = 8;
    int max_restarts = 32;
    /// Allowed fractional excess of the larger side over half.
    double imbalance = 0.2;
    /// Independent partition attempts (seed and balance varied); the
    /// cheapest tree within the caps wins.
    int trials = 4;
    /// Frontier size for refine_subtrees after each attempt; 0 skips it.
    int refine_pieces = 8;
};

struct FirstCut {
    std::vector<int> head;
    std::vector<int> tail;
    int n_c = 0;
};

/// Raised when no tree meets the caps; carries the least-violating tree.
class BudgetExhausted : public Error {
   public:
    BudgetExhausted(std::string stage, const std::string &what, ContractionTree best)
        : Error(Errc::budget_exhausted, stage + ": " + what), stage_(std::move(stage)), best_(std::move(best)) {
    }
    const std::string &stage() const noexcept {
        return stage_;
    }
    const ContractionTree &best() const noexcept {
        return best_;
    }

   private:
    std::string stage_;
    ContractionTree best_;
};

/// Minimum cut separating nodes with open legs (tail) from nodes holding only
/// closed projections (head). `maximal_tail` picks the other extreme among
/// minimum cuts.
FirstCut find_first_cut(const TensorNetwork &tn, const PartitionConstraints &cons, bool maximal_tail = false);

/// Greedy pairwise order over a subset of network nodes. The result's leaves
/// are `nodes` sorted.
ContractionTree greedy_order(const TensorNetwork &tn, const std::vector<int> &nodes);

/// First cut, then recursive bipartition of head and tail with greedy leaves,
/// polished by refine_subtrees. Throws BudgetExhausted when no attempt meets
/// the caps.
ContractionTree hierarchical_partition(const TensorNetwork &tn, const PartitionConstraints &cons);

/// Rebuilds subtrees optimally over frontiers of up to `max_pieces` pieces,
/// costliest steps first, for up to `rounds` sweeps while the total cost
/// drops. The largest rank never grows and the first cut is kept.
ContractionTree refine_subtrees(const TensorNetwork &tn, const ContractionTree &tree, int max_pieces = 8,
                                int rounds = 8);

/// Steps where the smaller operand is below `threshold` times the larger.
int imbalanced_steps(const TensorNetwork &tn, const ContractionTree &tree, double threshold);

/// Rotates ((B, s1), s2) into (B, (s1, s2)) where that lowers imbalanced_steps.
ContractionTree branch_merge(const TensorNetwork &tn, const ContractionTree &tree, double threshold);

struct OpenQubitChoice {
    std::vector<int> open;
    int n_c = 0;
    int tail_size = 0;
};

/// Grows an open set of `n_open` qubits one at a time, keeping the first cut small.
OpenQubitChoice choose_open_qubits(const Circuit &c, int n_open, const PartitionConstraints &cons);

}  // namespace bighead
