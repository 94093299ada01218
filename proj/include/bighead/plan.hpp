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
#include <string>
#include <vector>

#include "bighead/network.hpp"
#include "bighead/orderfind.hpp"
#include "bighead/slicer.hpp"
#include "bighead/tree.hpp"
#include "json.hpp"

namespace bighead {

/// Everything `run` needs besides the circuit: the tree, the open set and the slices.
struct ContractionPlan {
    std::string circuit_hash;
    std::uint64_t topology_hash = 0;
    std::vector<int> open_qubits;
    ContractionTree tree;
    SlicePlan slices;
    SliceScope scope = SliceScope::head;
    PartitionConstraints constraints;
    /// log2 cap on the tail object; open indices are chunked above it.
    int tail_space = 26;

    /// Hash of the fields that determine results (not annotations).
    std::uint64_t hash() const;
};

inline constexpr int kPlanSchemaVersion = 1;

/// Deterministic JSON (sorted keys) including annotations recomputed from `tn`.
nlohmann::json plan_to_json(const ContractionPlan &plan, const TensorNetwork &tn);
ContractionPlan plan_from_json(const nlohmann::json &j);

struct PlanOptions {
    PartitionConstraints constraints;
    SliceOptions slicing{30, false, SliceScope::head, 6};
    int tail_space = 26;
    /// Branch-merge threshold; 0 disables the pass.
    double branch_merge = 0.0;
};

/// Plan with hashes, open set and options filled in but no tree or slices.
ContractionPlan plan_skeleton(const Circuit &c, const TensorNetwork &tn, const PlanOptions &opts);

/// Orders and slices `tn` (built from `c`).
ContractionPlan make_plan(const Circuit &c, const TensorNetwork &tn, const PlanOptions &opts);

/// Throws unless the plan's tree and slices fit the network.
void check_plan(const TensorNetwork &tn, const ContractionPlan &plan);

}  // namespace bighead
