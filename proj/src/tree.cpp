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

#include "bighead/tree.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "bighead/errors.hpp"

namespace bighead {

std::optional<int> ContractionTree::first_cut() const {
    if (!head_root || !tail_root || steps.empty()) {
        return std::nullopt;
    }
    return static_cast<int>(steps.size()) - 1;
}

std::vector<int> ContractionTree::leaves_under(int id) const {
    std::vector<int> out;
    std::vector<int> stack{id};
    while (!stack.empty()) {
        const int x = stack.back();
        stack.pop_back();
        if (is_leaf(x)) {
            out.push_back(leaves[static_cast<std::size_t>(x)]);
        } else {
            stack.push_back(step_of(x).lhs);
            stack.push_back(step_of(x).rhs);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> ContractionTree::steps_under(int id) const {
    // Post-order numbering makes a subtree's steps a contiguous range ending at id.
    if (is_leaf(id)) {
        return {};
    }
    const int end = id - leaf_count();
    std::vector<int> stack{id};
    int count = 0;
    while (!stack.empty()) {
        const int x = stack.back();
        stack.pop_back();
        if (!is_leaf(x)) {
            ++count;
            stack.push_back(step_of(x).lhs);
            stack.push_back(step_of(x).rhs);
        }
    }
    std::vector<int> out;
    for (int s = end - count + 1; s <= end; ++s) {
        out.push_back(s);
    }
    return out;
}

int TreeBuilder::leaf(int node) {
    entries_.push_back({node, -1, -1});
    return static_cast<int>(entries_.size()) - 1;
}

int TreeBuilder::join(int a, int b) {
    entries_.push_back({-1, a, b});
    return static_cast<int>(entries_.size()) - 1;
}

ContractionTree TreeBuilder::finish(int root, std::optional<int> head, std::optional<int> tail) const {
    ContractionTree t;
    std::vector<int> stack{root};
    while (!stack.empty()) {
        const int x = stack.back();
        stack.pop_back();
        const Entry &e = entries_[static_cast<std::size_t>(x)];
        if (e.node >= 0) {
            t.leaves.push_back(e.node);
        } else {
            stack.push_back(e.left);
            stack.push_back(e.right);
        }
    }
    std::sort(t.leaves.begin(), t.leaves.end());
    if (std::adjacent_find(t.leaves.begin(), t.leaves.end()) != t.leaves.end()) {
        throw Error(Errc::tree_network_mismatch, "tree uses a leaf twice");
    }
    const int L = t.leaf_count();
    std::vector<int> canon(entries_.size(), -1);
    // iterative post-order
    std::vector<std::pair<int, bool>> work{{root, false}};
    while (!work.empty()) {
        auto [x, expanded] = work.back();
        work.pop_back();
        const Entry &e = entries_[static_cast<std::size_t>(x)];
        if (e.node >= 0) {
            canon[static_cast<std::size_t>(x)] =
                static_cast<int>(std::lower_bound(t.leaves.begin(), t.leaves.end(), e.node) - t.leaves.begin());
            continue;
        }
        if (!expanded) {
            work.push_back({x, true});
            work.push_back({e.right, false});
            work.push_back({e.left, false});
            continue;
        }
        const int out = L + static_cast<int>(t.steps.size());
        t.steps.push_back({canon[static_cast<std::size_t>(e.left)], canon[static_cast<std::size_t>(e.right)], out});
        canon[static_cast<std::size_t>(x)] = out;
    }
    if (head) {
        t.head_root = canon.at(static_cast<std::size_t>(*head));
    }
    if (tail) {
        t.tail_root = canon.at(static_cast<std::size_t>(*tail));
    }
    return t;
}

TreeBuilder to_builder(const ContractionTree &tree, std::vector<int> *handles) {
    TreeBuilder b;
    handles->assign(static_cast<std::size_t>(tree.size()), -1);
    for (int k = 0; k < tree.leaf_count(); ++k) {
        (*handles)[static_cast<std::size_t>(k)] = b.leaf(tree.leaves[static_cast<std::size_t>(k)]);
    }
    for (const auto &s : tree.steps) {
        (*handles)[static_cast<std::size_t>(s.out_id)] =
            b.join((*handles)[static_cast<std::size_t>(s.lhs)], (*handles)[static_cast<std::size_t>(s.rhs)]);
    }
    return b;
}

double Complexity::log2_tc() const {
    return tc > 0 ? std::log2(tc) : 0.0;
}

std::vector<std::vector<int>> boundary_sets(const TensorNetwork &tn, const ContractionTree &tree,
                                            const std::set<int> &removed) {
    std::vector<std::vector<int>> b(static_cast<std::size_t>(tree.size()));
    for (int k = 0; k < tree.leaf_count(); ++k) {
        const auto &node = tn.nodes.at(static_cast<std::size_t>(tree.leaves[static_cast<std::size_t>(k)]));
        auto &dst = b[static_cast<std::size_t>(k)];
        for (int i : node.indices) {
            if (removed.count(i) == 0) {
                dst.push_back(i);
            }
        }
        std::sort(dst.begin(), dst.end());
    }
    for (const auto &s : tree.steps) {
        const auto &l = b[static_cast<std::size_t>(s.lhs)];
        const auto &r = b[static_cast<std::size_t>(s.rhs)];
        auto &dst = b[static_cast<std::size_t>(s.out_id)];
        std::set_symmetric_difference(l.begin(), l.end(), r.begin(), r.end(), std::back_inserter(dst));
    }
    return b;
}

Complexity complexity_of(const TensorNetwork &tn, const ContractionTree &tree, const std::set<int> &removed,
                         std::optional<int> subtree) {
    const auto b = boundary_sets(tn, tree, removed);
    Complexity cx;
    std::vector<int> steps;
    std::vector<int> ids;
    if (subtree) {
        steps = tree.steps_under(*subtree);
        if (tree.is_leaf(*subtree)) {
            ids.push_back(*subtree);
        }
        for (int s : steps) {
            const auto &st = tree.steps[static_cast<std::size_t>(s)];
            ids.push_back(st.out_id);
            if (tree.is_leaf(st.lhs)) ids.push_back(st.lhs);
            if (tree.is_leaf(st.rhs)) ids.push_back(st.rhs);
        }
    } else {
        for (int s = 0; s < static_cast<int>(tree.steps.size()); ++s) {
            steps.push_back(s);
        }
        for (int id = 0; id < tree.size(); ++id) {
            ids.push_back(id);
        }
    }
    for (int id : ids) {
        cx.sc = std::max(cx.sc, static_cast<int>(b[static_cast<std::size_t>(id)].size()));
    }
    for (int s : steps) {
        const auto &st = tree.steps[static_cast<std::size_t>(s)];
        const auto &l = b[static_cast<std::size_t>(st.lhs)];
        const auto &r = b[static_cast<std::size_t>(st.rhs)];
        std::vector<int> shared;
        std::set_intersection(l.begin(), l.end(), r.begin(), r.end(), std::back_inserter(shared));
        StepCost c;
        c.n_ab = static_cast<int>(shared.size());
        c.n_a = static_cast<int>(l.size()) - c.n_ab;
        c.n_b = static_cast<int>(r.size()) - c.n_ab;
        cx.per_step.push_back(c);
        cx.tc += std::ldexp(1.0, c.log2_time());
        if (c.log2_time() >= 64) {
            cx.tc_overflow = true;
        } else if (!cx.tc_overflow) {
            const std::uint64_t t = std::uint64_t{1} << c.log2_time();
            if (cx.tc_exact > std::numeric_limits<std::uint64_t>::max() - t) {
                cx.tc_overflow = true;
            } else {
                cx.tc_exact += t;
            }
        }
    }
    if (cx.tc_overflow) {
        cx.tc_exact = std::numeric_limits<std::uint64_t>::max();
    }
    return cx;
}

void check_tree(const TensorNetwork &tn, const ContractionTree &tree) {
    auto fail = [](const std::string &msg) { throw Error(Errc::tree_network_mismatch, msg); };
    if (tree.leaf_count() != tn.node_count()) {
        fail("tree has " + std::to_string(tree.leaf_count()) + " leaves, network has " +
             std::to_string(tn.node_count()) + " nodes");
    }
    for (int k = 0; k < tree.leaf_count(); ++k) {
        if (tree.leaves[static_cast<std::size_t>(k)] != k) {
            fail("leaves must list every network node in ascending order");
        }
    }
    if (tree.steps.size() + 1 != tree.leaves.size() && !tree.leaves.empty()) {
        fail("a binary tree over L leaves has L-1 steps");
    }
    std::vector<int> used(static_cast<std::size_t>(tree.size()), 0);
    for (std::size_t s = 0; s < tree.steps.size(); ++s) {
        const auto &st = tree.steps[s];
        if (st.out_id != tree.leaf_count() + static_cast<int>(s)) {
            fail("step " + std::to_string(s) + " has out_id " + std::to_string(st.out_id));
        }
        for (int c : {st.lhs, st.rhs}) {
            if (c < 0 || c >= st.out_id) {
                fail("step " + std::to_string(s) + " references an id not yet produced");
            }
            if (used[static_cast<std::size_t>(c)]++ != 0) {
                fail("tree id " + std::to_string(c) + " consumed twice");
            }
        }
    }
    for (auto r : {tree.head_root, tree.tail_root}) {
        if (r && (*r < 0 || *r >= tree.size())) {
            fail("head/tail root out of range");
        }
    }
    if (tree.head_root && tree.tail_root) {
        const auto &last = tree.steps.back();
        if (last.lhs != *tree.head_root || last.rhs != *tree.tail_root) {
            fail("root step must join head_root and tail_root");
        }
    } else if ((tree.head_root || tree.tail_root) && !tree.leaves.empty()) {
        const int r = tree.head_root ? *tree.head_root : *tree.tail_root;
        if (r != tree.root()) {
            fail("a lone head or tail must be the root");
        }
    }
}

int cut_size(const TensorNetwork &tn, const ContractionTree &tree) {
    if (!tree.head_root || !tree.tail_root) {
        return 0;
    }
    const auto b = boundary_sets(tn, tree);
    const auto &h = b[static_cast<std::size_t>(*tree.head_root)];
    const auto &t = b[static_cast<std::size_t>(*tree.tail_root)];
    std::vector<int> shared;
    std::set_intersection(h.begin(), h.end(), t.begin(), t.end(), std::back_inserter(shared));
    return static_cast<int>(shared.size());
}

void check_first_cut(const TensorNetwork &tn, const ContractionTree &tree) {
    std::set<int> tail;
    std::set<int> head;
    if (tree.tail_root) {
        auto v = tree.leaves_under(*tree.tail_root);
        tail.insert(v.begin(), v.end());
    }
    if (tree.head_root) {
        auto v = tree.leaves_under(*tree.head_root);
        head.insert(v.begin(), v.end());
    }
    for (auto [q, idx] : tn.open_output_indices) {
        const int node = tn.index_endpoints.at(idx).front();
        if (tail.count(node) == 0) {
            throw Error(Errc::tree_network_mismatch,
                        "open qubit " + std::to_string(q) + " is not under the tail of the first cut");
        }
    }
    for (auto [q, node] : tn.output_nodes) {
        if (tn.open_output_indices.count(q) != 0) {
            continue;
        }
        bool has_open = false;
        for (int i : tn.nodes[static_cast<std::size_t>(node)].indices) {
            has_open = has_open || tn.is_open_index(i);
        }
        if (!has_open && head.count(node) == 0) {
            throw Error(Errc::tree_network_mismatch,
                        "closed qubit " + std::to_string(q) + " is not under the head of the first cut");
        }
    }
}

nlohmann::json tree_to_json(const ContractionTree &tree) {
    nlohmann::json j;
    j["leaves"] = tree.leaves;
    auto steps = nlohmann::json::array();
    for (const auto &s : tree.steps) {
        steps.push_back({{"lhs", s.lhs}, {"rhs", s.rhs}, {"out_id", s.out_id}});
    }
    j["steps"] = std::move(steps);
    j["head_root"] = tree.head_root ? nlohmann::json(*tree.head_root) : nlohmann::json(nullptr);
    j["tail_root"] = tree.tail_root ? nlohmann::json(*tree.tail_root) : nlohmann::json(nullptr);
    auto fc = tree.first_cut();
    j["first_cut"] = fc ? nlohmann::json(*fc) : nlohmann::json(nullptr);
    return j;
}

ContractionTree tree_from_json(const nlohmann::json &j) {
    try {
        ContractionTree t;
        t.leaves = j.at("leaves").get<std::vector<int>>();
        for (const auto &s : j.at("steps")) {
            t.steps.push_back({s.at("lhs").get<int>(), s.at("rhs").get<int>(), s.at("out_id").get<int>()});
        }
        if (j.contains("head_root") && !j["head_root"].is_null()) {
            t.head_root = j["head_root"].get<int>();
        }
        if (j.contains("tail_root") && !j["tail_root"].is_null()) {
            t.tail_root = j["tail_root"].get<int>();
        }
        return t;
    } catch (const nlohmann::json::exception &e) {
        throw Error(Errc::format_error, std::string("contraction tree: ") + e.what());
    }
}

}  // namespace bighead
