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


#include "reconfigure.hpp"

#include <algorithm>
#include <cmath>

namespace bighead::detail {

SubsetPlan optimize_pieces(const std::vector<std::vector<int>> &pieces, int rank_cap) {
    const int k = static_cast<int>(pieces.size());
    const int full = (1 << k) - 1;
    SubsetPlan p;
    p.cost.assign(static_cast<std::size_t>(full + 1), INFINITY);
    p.split.assign(static_cast<std::size_t>(full + 1), 0);
    p.boundary.assign(static_cast<std::size_t>(full + 1), {});
    for (int s = 1; s <= full; ++s) {
        const int low = s & -s;
        if (s == low) {
            const int i = __builtin_ctz(static_cast<unsigned>(s));
            p.boundary[static_cast<std::size_t>(s)] = pieces[static_cast<std::size_t>(i)];
            p.cost[static_cast<std::size_t>(s)] = 0;
            continue;
        }
        const auto &a = p.boundary[static_cast<std::size_t>(low)];
        const auto &b = p.boundary[static_cast<std::size_t>(s ^ low)];
        std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                      std::back_inserter(p.boundary[static_cast<std::size_t>(s)]));
        if (static_cast<int>(p.boundary[static_cast<std::size_t>(s)].size()) > rank_cap) {
            continue;
        }
        // enumerate splits with the lowest element on the left to avoid duplicates
        for (int l = (s - 1) & s; l > 0; l = (l - 1) & s) {
            if ((l & low) == 0) continue;
            const int r = s ^ l;
            const double cl = p.cost[static_cast<std::size_t>(l)];
            const double cr = p.cost[static_cast<std::size_t>(r)];
            if (!std::isfinite(cl) || !std::isfinite(cr)) continue;
            const auto &bl = p.boundary[static_cast<std::size_t>(l)];
            const auto &br = p.boundary[static_cast<std::size_t>(r)];
            std::vector<int> uni;
            std::set_union(bl.begin(), bl.end(), br.begin(), br.end(), std::back_inserter(uni));
            const double c = cl + cr + std::ldexp(1.0, static_cast<int>(uni.size()));
            if (c < p.cost[static_cast<std::size_t>(s)]) {
                p.cost[static_cast<std::size_t>(s)] = c;
                p.split[static_cast<std::size_t>(s)] = l;
            }
        }
    }
    return p;
}

std::optional<ContractionTree> reconfigure_at(const TensorNetwork &tn, const ContractionTree &tree, int x,
                                              const std::set<int> &removed, int max_pieces, int rank_cap) {
    const auto b = boundary_sets(tn, tree, removed);
    auto rank = [&](int id) { return static_cast<int>(b[static_cast<std::size_t>(id)].size()); };
    std::vector<int> frontier{x};
    std::set<int> region;
    while (static_cast<int>(frontier.size()) < max_pieces) {
        int pick = -1;
        for (std::size_t i = 0; i < frontier.size(); ++i) {
            const int f = frontier[i];
            if (tree.is_leaf(f)) continue;
            if (pick < 0 || rank(f) > rank(frontier[static_cast<std::size_t>(pick)])) pick = static_cast<int>(i);
        }
        if (pick < 0) break;
        const int f = frontier[static_cast<std::size_t>(pick)];
        region.insert(f);
        frontier.erase(frontier.begin() + pick);
        frontier.push_back(tree.step_of(f).lhs);
        frontier.push_back(tree.step_of(f).rhs);
    }
    if (frontier.size() < 3) {
        return std::nullopt;
    }
    std::sort(frontier.begin(), frontier.end());
    std::vector<std::vector<int>> pieces;
    for (int f : frontier) pieces.push_back(b[static_cast<std::size_t>(f)]);
    const SubsetPlan sp = optimize_pieces(pieces, rank_cap);
    const int full = (1 << frontier.size()) - 1;
    if (!std::isfinite(sp.cost[static_cast<std::size_t>(full)])) {
        return std::nullopt;
    }
    double old_cost = 0;
    for (int r : region) {
        const auto &st = tree.step_of(r);
        const auto &l = b[static_cast<std::size_t>(st.lhs)];
        const auto &rr = b[static_cast<std::size_t>(st.rhs)];
        std::vector<int> uni;
        std::set_union(l.begin(), l.end(), rr.begin(), rr.end(), std::back_inserter(uni));
        old_cost += std::ldexp(1.0, static_cast<int>(uni.size()));
    }
    if (!(sp.cost[static_cast<std::size_t>(full)] < old_cost)) {
        return std::nullopt;
    }
    std::vector<int> handle(static_cast<std::size_t>(tree.size()), -1);
    TreeBuilder nb;
    for (int k = 0; k < tree.leaf_count(); ++k) {
        handle[static_cast<std::size_t>(k)] = nb.leaf(tree.leaves[static_cast<std::size_t>(k)]);
    }
    auto emit = [&](auto &&self, int s) -> int {
        if ((s & (s - 1)) == 0) {
            return handle[static_cast<std::size_t>(frontier[static_cast<std::size_t>(__builtin_ctz(static_cast<unsigned>(s)))])];
        }
        const int l = sp.split[static_cast<std::size_t>(s)];
        const int hl = self(self, l);
        const int hr = self(self, s ^ l);
        return nb.join(hl, hr);
    };
    for (const auto &st : tree.steps) {
        if (st.out_id == x) {
            handle[static_cast<std::size_t>(x)] = emit(emit, full);
        } else if (region.count(st.out_id) == 0) {
            handle[static_cast<std::size_t>(st.out_id)] =
                nb.join(handle[static_cast<std::size_t>(st.lhs)], handle[static_cast<std::size_t>(st.rhs)]);
        }
    }
    std::optional<int> h, t;
    if (tree.head_root) h = handle[static_cast<std::size_t>(*tree.head_root)];
    if (tree.tail_root) t = handle[static_cast<std::size_t>(*tree.tail_root)];
    return nb.finish(handle[static_cast<std::size_t>(tree.root())], h, t);
}

ContractionTree refine_tree(const TensorNetwork &tn, const ContractionTree &tree, const std::set<int> &removed,
                            int max_pieces, int rounds, std::optional<int> rank_cap) {
    if (tree.steps.empty() || max_pieces < 3) {
        return tree;
    }
    max_pieces = std::min(max_pieces, 12);
    struct Node {
        int lhs = -1;
        int rhs = -1;
        std::vector<int> b;
    };
    const auto bs = boundary_sets(tn, tree, removed);
    std::vector<Node> nodes(static_cast<std::size_t>(tree.size()));
    for (int id = 0; id < tree.size(); ++id) {
        nodes[static_cast<std::size_t>(id)].b = bs[static_cast<std::size_t>(id)];
    }
    for (const auto &st : tree.steps) {
        nodes[static_cast<std::size_t>(st.out_id)].lhs = st.lhs;
        nodes[static_cast<std::size_t>(st.out_id)].rhs = st.rhs;
    }
    const int root = tree.root();
    const bool keep_root = tree.first_cut().has_value();
    int sc = 0;
    for (const auto &n : nodes) sc = std::max(sc, static_cast<int>(n.b.size()));
    if (rank_cap) sc = *rank_cap;
    auto node = [&](int id) -> Node & { return nodes[static_cast<std::size_t>(id)]; };
    auto rank = [&](int id) { return static_cast<int>(node(id).b.size()); };
    auto join_time = [&](int id) {
        const auto &l = node(node(id).lhs).b;
        const auto &r = node(node(id).rhs).b;
        std::vector<int> uni;
        std::set_union(l.begin(), l.end(), r.begin(), r.end(), std::back_inserter(uni));
        return static_cast<int>(uni.size());
    };

    for (int round = 0; round < rounds; ++round) {
        std::vector<std::pair<int, int>> order;
        std::vector<int> stack{root};
        while (!stack.empty()) {
            const int id = stack.back();
            stack.pop_back();
            if (node(id).lhs < 0) continue;
            order.emplace_back(-join_time(id), id);
            stack.push_back(node(id).lhs);
            stack.push_back(node(id).rhs);
        }
        std::sort(order.begin(), order.end());
        std::vector<char> dead(nodes.size(), 0);
        bool improved = false;
        for (auto [neg, x] : order) {
            if (dead[static_cast<std::size_t>(x)] || (keep_root && x == root)) continue;
            std::vector<int> frontier{x};
            std::vector<int> region;
            while (static_cast<int>(frontier.size()) < max_pieces) {
                int pick = -1;
                for (std::size_t i = 0; i < frontier.size(); ++i) {
                    const int f = frontier[i];
                    if (node(f).lhs < 0) continue;
                    if (pick < 0 || rank(f) > rank(frontier[static_cast<std::size_t>(pick)])) {
                        pick = static_cast<int>(i);
                    }
                }
                if (pick < 0) break;
                const int f = frontier[static_cast<std::size_t>(pick)];
                region.push_back(f);
                frontier.erase(frontier.begin() + pick);
                frontier.push_back(node(f).lhs);
                frontier.push_back(node(f).rhs);
            }
            if (frontier.size() < 3) continue;
            double old_cost = 0;
            for (int r : region) old_cost += std::ldexp(1.0, join_time(r));
            std::vector<std::vector<int>> pieces;
            for (int f : frontier) pieces.push_back(node(f).b);
            const detail::SubsetPlan sp = detail::optimize_pieces(pieces, sc);
            const int full = (1 << frontier.size()) - 1;
            if (!(sp.cost[static_cast<std::size_t>(full)] < old_cost * (1 - 1e-9))) continue;
            for (int r : region) {
                if (r != x) dead[static_cast<std::size_t>(r)] = 1;
            }
            auto emit = [&](auto &&self, int s) -> int {
                if ((s & (s - 1)) == 0) {
                    return frontier[static_cast<std::size_t>(__builtin_ctz(static_cast<unsigned>(s)))];
                }
                const int l = sp.split[static_cast<std::size_t>(s)];
                const int hl = self(self, l);
                const int hr = self(self, s ^ l);
                int id = x;
                if (s != full) {
                    id = static_cast<int>(nodes.size());
                    nodes.emplace_back();
                    dead.push_back(0);
                    node(id).b = sp.boundary[static_cast<std::size_t>(s)];
                }
                node(id).lhs = hl;
                node(id).rhs = hr;
                return id;
            };
            emit(emit, full);
            improved = true;
        }
        if (!improved) break;
    }

    TreeBuilder b;
    std::optional<int> h, t;
    auto build = [&](auto &&self, int id) -> int {
        int handle;
        if (node(id).lhs < 0) {
            handle = b.leaf(tree.leaves[static_cast<std::size_t>(id)]);
        } else {
            const int hl = self(self, node(id).lhs);
            const int hr = self(self, node(id).rhs);
            handle = b.join(hl, hr);
        }
        if (tree.head_root && id == *tree.head_root) h = handle;
        if (tree.tail_root && id == *tree.tail_root) t = handle;
        return handle;
    };
    const int r = build(build, root);
    return b.finish(r, h, t);
}

}  // namespace bighead::detail
