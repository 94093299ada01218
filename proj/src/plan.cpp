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

#include "bighead/plan.hpp"

#include <algorithm>

#include "bighead/errors.hpp"
#include "bighead/hash.hpp"

namespace bighead {

namespace {

const char *scope_name(SliceScope s) {
    return s == SliceScope::head ? "head" : "whole_tree";
}

nlohmann::json complexity_json(const Complexity &cx) {
    return {{"tc", cx.tc},
            {"tc_exact", cx.tc_overflow ? nlohmann::json(nullptr) : nlohmann::json(cx.tc_exact)},
            {"log2_tc", cx.log2_tc()},
            {"sc", cx.sc},
            {"steps", cx.per_step.size()}};
}

}  // namespace

std::uint64_t ContractionPlan::hash() const {
    nlohmann::json core;
    core["circuit_hash"] = circuit_hash;
    core["topology_hash"] = topology_hash;
    core["open_qubits"] = open_qubits;
    core["tree"] = tree_to_json(tree);
    core["slices"] = slices.sliced_indices;
    core["scope"] = scope_name(scope);
    core["tail_space"] = tail_space;
    return fnv1a(core.dump());
}

nlohmann::json plan_to_json(const ContractionPlan &plan, const TensorNetwork &tn) {
    nlohmann::json j = tree_to_json(plan.tree);
    j["schema_version"] = kPlanSchemaVersion;
    j["circuit_hash"] = plan.circuit_hash;
    j["topology_hash"] = to_hex(plan.topology_hash);
    j["open_qubits"] = plan.open_qubits;
    j["seed"] = plan.constraints.rng_seed;
    j["constraints"] = {{"max_space", plan.constraints.max_space},
                        {"max_time", plan.constraints.max_time},
                        {"leaf_limit", plan.constraints.leaf_limit},
                        {"max_cut", plan.constraints.max_cut ? nlohmann::json(*plan.constraints.max_cut)
                                                             : nlohmann::json(nullptr)},
                        {"restarts", plan.constraints.restarts},
                        {"max_restarts", plan.constraints.max_restarts},
                        {"imbalance", plan.constraints.imbalance},
                        {"trials", plan.constraints.trials},
                        {"refine_pieces", plan.constraints.refine_pieces}};
    j["slices"] = plan.slices.sliced_indices;
    j["slice_scope"] = scope_name(plan.scope);
    j["tail_space"] = plan.tail_space;
    j["plan_hash"] = to_hex(plan.hash());

    const Complexity full = complexity_of(tn, plan.tree);
    auto steps = nlohmann::json::array();
    for (const auto &c : full.per_step) {
        steps.push_back({{"n_a", c.n_a},
                         {"n_b", c.n_b},
                         {"n_ab", c.n_ab},
                         {"log2_time", c.log2_time()},
                         {"log2_space", c.log2_space()}});
    }
    nlohmann::json ann;
    ann["steps"] = std::move(steps);
    ann["total"] = complexity_json(full);
    ann["n_c"] = cut_size(tn, plan.tree);
    ann["n_head"] = plan.tree.head_root ? plan.tree.leaves_under(*plan.tree.head_root).size() : 0;
    ann["n_tail"] = plan.tree.tail_root ? plan.tree.leaves_under(*plan.tree.tail_root).size() : 0;
    if (plan.tree.head_root) {
        ann["head"] = complexity_json(complexity_of(tn, plan.tree, {}, plan.tree.head_root));
    }
    if (plan.tree.tail_root) {
        ann["tail"] = complexity_json(complexity_of(tn, plan.tree, {}, plan.tree.tail_root));
    }
    j["annotations"] = std::move(ann);
    j["subtask"] = {{"n_e", plan.slices.n_e()},
                    {"count", plan.slices.subtask_count()},
                    {"overhead", plan.slices.overhead},
                    {"complexity", complexity_json(plan.slices.per_subtask)}};
    return j;
}

ContractionPlan plan_from_json(const nlohmann::json &j) {
    try {
        ContractionPlan p;
        if (j.value("schema_version", 0) != kPlanSchemaVersion) {
            throw Error(Errc::format_error, "unsupported plan schema_version");
        }
        p.tree = tree_from_json(j);
        p.circuit_hash = j.at("circuit_hash").get<std::string>();
        p.topology_hash = std::stoull(j.at("topology_hash").get<std::string>(), nullptr, 16);
        p.open_qubits = j.at("open_qubits").get<std::vector<int>>();
        p.constraints.rng_seed = j.at("seed").get<std::uint64_t>();
        const auto &c = j.at("constraints");
        p.constraints.max_space = c.at("max_space").get<int>();
        p.constraints.max_time = c.at("max_time").get<int>();
        p.constraints.leaf_limit = c.at("leaf_limit").get<int>();
        if (!c.at("max_cut").is_null()) p.constraints.max_cut = c["max_cut"].get<int>();
        p.constraints.restarts = c.at("restarts").get<int>();
        p.constraints.max_restarts = c.at("max_restarts").get<int>();
        p.constraints.imbalance = c.at("imbalance").get<double>();
        p.constraints.trials = c.value("trials", p.constraints.trials);
        p.constraints.refine_pieces = c.value("refine_pieces", p.constraints.refine_pieces);
        p.slices.sliced_indices = j.at("slices").get<std::vector<int>>();
        p.scope = j.at("slice_scope").get<std::string>() == "head" ? SliceScope::head : SliceScope::whole_tree;
        p.tail_space = j.at("tail_space").get<int>();
        if (j.contains("subtask")) {
            p.slices.overhead = j["subtask"].value("overhead", 1.0);
        }
        const std::string stored = j.value("plan_hash", "");
        if (!stored.empty() && stored != to_hex(p.hash())) {
            throw Error(Errc::format_error, "plan_hash does not match the plan contents");
        }
        return p;
    } catch (const nlohmann::json::exception &e) {
        throw Error(Errc::format_error, std::string("plan: ") + e.what());
    }
}

ContractionPlan plan_skeleton(const Circuit &c, const TensorNetwork &tn, const PlanOptions &opts) {
    ContractionPlan plan;
    plan.circuit_hash = circuit_hash(c);
    plan.topology_hash = tn.topology_hash();
    plan.open_qubits = tn.open_qubits();
    plan.constraints = opts.constraints;
    plan.constraints.tail_open_qubits = plan.open_qubits;
    plan.scope = opts.slicing.scope;
    plan.tail_space = opts.tail_space;
    return plan;
}

ContractionPlan make_plan(const Circuit &c, const TensorNetwork &tn, const PlanOptions &opts) {
    ContractionPlan plan = plan_skeleton(c, tn, opts);
    ContractionTree tree = hierarchical_partition(tn, plan.constraints);
    if (opts.branch_merge > 0) {
        tree = branch_merge(tn, tree, opts.branch_merge);
    }
    SliceResult sr = select_slices(tn, tree, opts.slicing);
    plan.tree = std::move(sr.tree);
    plan.slices = std::move(sr.plan);
    return plan;
}

void check_plan(const TensorNetwork &tn, const ContractionPlan &plan) {
    if (plan.topology_hash != tn.topology_hash()) {
        throw Error(Errc::tree_network_mismatch, "plan was built for a different network topology");
    }
    if (plan.open_qubits != tn.open_qubits()) {
        throw Error(Errc::tree_network_mismatch, "plan open qubits differ from the network's");
    }
    check_tree(tn, plan.tree);
    check_first_cut(tn, plan.tree);
    std::set<int> seen;
    for (int i : plan.slices.sliced_indices) {
        auto it = tn.index_endpoints.find(i);
        if (it == tn.index_endpoints.end() || it->second.size() != 2 || !seen.insert(i).second) {
            throw Error(Errc::tree_network_mismatch, "sliced index " + std::to_string(i) + " is not a distinct bond");
        }
    }
}

}  // namespace bighead
