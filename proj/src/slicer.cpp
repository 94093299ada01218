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

#include "bighead/slicer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "bighead/engine.hpp"
#include "bighead/errors.hpp"
#include "reconfigure.hpp"

namespace bighead {

namespace {

struct ScopeView {
    std::optional<int> root;
    std::vector<int> ids;    // tree ids in scope (leaves and steps)
    std::vector<int> steps;  // step indices in scope
};

ScopeView scope_view(const ContractionTree &tree, SliceScope scope) {
    ScopeView v;
    if (scope == SliceScope::head) {
        if (!tree.head_root) {
            return v;
        }
        v.root = tree.head_root;
    } else if (tree.size() > 0) {
        v.root = tree.root();
    } else {
        return v;
    }
    v.steps = tree.steps_under(*v.root);
    if (tree.is_leaf(*v.root)) {
        v.ids.push_back(*v.root);
    }
    for (int s : v.steps) {
        const auto &st = tree.steps[static_cast<std::size_t>(s)];
        v.ids.push_back(st.out_id);
        if (tree.is_leaf(st.lhs)) v.ids.push_back(st.lhs);
        if (tree.is_leaf(st.rhs)) v.ids.push_back(st.rhs);
    }
    return v;
}

bool contains(const std::vector<int> &sorted, int x) {
    return std::binary_search(sorted.begin(), sorted.end(), x);
}

Complexity scope_complexity(const TensorNetwork &tn, const ContractionTree &tree, const std::set<int> &removed,
                            SliceScope scope) {
    const ScopeView v = scope_view(tree, scope);
    if (!v.root) {
        return Complexity{};
    }
    return complexity_of(tn, tree, removed, v.root);
}

}  // namespace

SliceResult select_slices(const TensorNetwork &tn, const ContractionTree &tree, const SliceOptions &opts) {
    SliceResult res;
    res.tree = tree;
    std::set<int> removed;
    const Complexity base = scope_complexity(tn, tree, removed, opts.scope);
    Complexity cur = base;
    while (cur.sc > opts.target_space) {
        const ScopeView v = scope_view(res.tree, opts.scope);
        const auto b = boundary_sets(tn, res.tree, removed);
        std::set<int> leaf_nodes;
        for (int id : v.ids) {
            if (res.tree.is_leaf(id)) leaf_nodes.insert(res.tree.leaves[static_cast<std::size_t>(id)]);
        }
        // candidates: bonds inside the scope that touch a largest tensor
        std::set<int> cand;
        for (int id : v.ids) {
            const auto &bs = b[static_cast<std::size_t>(id)];
            if (static_cast<int>(bs.size()) != cur.sc) continue;
            for (int i : bs) {
                const auto &ends = tn.index_endpoints.at(i);
                if (ends.size() == 2 && leaf_nodes.count(ends[0]) && leaf_nodes.count(ends[1])) cand.insert(i);
            }
        }
        if (cand.empty()) {
            throw Error(Errc::cannot_reach_cap, "largest tensor 2^" + std::to_string(cur.sc) +
                                                    " has no sliceable index; cap 2^" +
                                                    std::to_string(opts.target_space) + " unreachable");
        }
        using Key = std::tuple<int, int, double, int>;
        std::optional<Key> best;
        for (int i : cand) {
            int sc = 0;
            int at_max = 0;
            for (int id : v.ids) {
                const auto &bs = b[static_cast<std::size_t>(id)];
                const int r = static_cast<int>(bs.size()) - (contains(bs, i) ? 1 : 0);
                if (r > sc) {
                    sc = r;
                    at_max = 1;
                } else if (r == sc) {
                    ++at_max;
                }
            }
            double tc = 0;
            for (int s : v.steps) {
                const auto &st = res.tree.steps[static_cast<std::size_t>(s)];
                const auto &l = b[static_cast<std::size_t>(st.lhs)];
                const auto &r = b[static_cast<std::size_t>(st.rhs)];
                int shared = 0;
                for (int x : l) shared += contains(r, x) ? 1 : 0;
                const int t = static_cast<int>(l.size() + r.size()) - shared -
                              ((contains(l, i) || contains(r, i)) ? 1 : 0);
                tc += std::ldexp(1.0, t);
            }
            const Key k{sc, at_max, tc, i};
            if (!best || k < *best) best = k;
        }
        const int chosen = std::get<3>(*best);
        removed.insert(chosen);
        res.plan.sliced_indices.push_back(chosen);
        cur = scope_complexity(tn, res.tree, removed, opts.scope);
        if (opts.reconfigure) {
            ContractionTree next =
                detail::refine_tree(tn, res.tree, removed, opts.reconfigure_leaves, 2, cur.sc);
            const Complexity nc = scope_complexity(tn, next, removed, opts.scope);
            if (nc.tc < cur.tc && nc.sc <= cur.sc) {
                res.tree = std::move(next);
                cur = nc;
            }
        }
    }
    res.plan.per_subtask = cur;
    const double subtasks = std::ldexp(1.0, res.plan.n_e());
    res.plan.overhead = base.tc > 0 ? subtasks * cur.tc / base.tc : 1.0;
    return res;
}

double sliced_equivalence_check(const TensorNetwork &tn, const ContractionTree &tree, const SlicePlan &plan) {
    const Tensor<double> whole = contract_tree<double>(tn, tree, {});
    std::vector<int> order = whole.indices;
    std::vector<cplx> sum(whole.data.size());
    const int ne = plan.n_e();
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << ne); ++a) {
        std::map<int, int> pins;
        for (int j = 0; j < ne; ++j) {
            pins[plan.sliced_indices[static_cast<std::size_t>(j)]] = static_cast<int>((a >> (ne - 1 - j)) & 1U);
        }
        const Tensor<double> part = permute(contract_tree<double>(tn, tree, pins), order);
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += part.data[k];
    }
    double scale = 0;
    for (const auto &x : whole.data) scale = std::max(scale, std::abs(x));
    double dev = 0;
    for (std::size_t k = 0; k < sum.size(); ++k) dev = std::max(dev, std::abs(sum[k] - whole.data[k]));
    if (dev == 0) return 0;
    return scale > 0 ? dev / scale : dev;
}

}  // namespace bighead
