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

#include "bighead/orderfind.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <tuple>

#include "bighead/hash.hpp"
#include "reconfigure.hpp"

namespace bighead {

namespace {

// ---------------------------------------------------------------- max flow

class MaxFlow {
   public:
    explicit MaxFlow(int n) : head_(static_cast<std::size_t>(n), -1) {
    }

    void add_edge(int u, int v, int cap_uv, int cap_vu) {
        arcs_.push_back({v, cap_uv, head_[static_cast<std::size_t>(u)]});
        head_[static_cast<std::size_t>(u)] = static_cast<int>(arcs_.size()) - 1;
        arcs_.push_back({u, cap_vu, head_[static_cast<std::size_t>(v)]});
        head_[static_cast<std::size_t>(v)] = static_cast<int>(arcs_.size()) - 1;
    }

    // Edmonds-Karp; flows here are small integers.
    int run(int s, int t) {
        int flow = 0;
        const std::size_t n = head_.size();
        while (true) {
            std::vector<int> via(n, -1);
            std::vector<char> seen(n, 0);
            std::deque<int> q{s};
            seen[static_cast<std::size_t>(s)] = 1;
            while (!q.empty() && !seen[static_cast<std::size_t>(t)]) {
                const int u = q.front();
                q.pop_front();
                for (int a = head_[static_cast<std::size_t>(u)]; a >= 0; a = arcs_[static_cast<std::size_t>(a)].next) {
                    const Arc &arc = arcs_[static_cast<std::size_t>(a)];
                    if (arc.cap > 0 && !seen[static_cast<std::size_t>(arc.to)]) {
                        seen[static_cast<std::size_t>(arc.to)] = 1;
                        via[static_cast<std::size_t>(arc.to)] = a;
                        q.push_back(arc.to);
                    }
                }
            }
            if (!seen[static_cast<std::size_t>(t)]) {
                return flow;
            }
            int push = std::numeric_limits<int>::max();
            for (int v = t; v != s;) {
                const int a = via[static_cast<std::size_t>(v)];
                push = std::min(push, arcs_[static_cast<std::size_t>(a)].cap);
                v = arcs_[static_cast<std::size_t>(a ^ 1)].to;
            }
            for (int v = t; v != s;) {
                const int a = via[static_cast<std::size_t>(v)];
                arcs_[static_cast<std::size_t>(a)].cap -= push;
                arcs_[static_cast<std::size_t>(a ^ 1)].cap += push;
                v = arcs_[static_cast<std::size_t>(a ^ 1)].to;
            }
            flow += push;
        }
    }

    // Vertices reachable from s (forward) or reaching t (backward) in the residual graph.
    std::vector<char> residual_reach(int root, bool forward) const {
        std::vector<char> seen(head_.size(), 0);
        std::vector<int> stack{root};
        seen[static_cast<std::size_t>(root)] = 1;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int a = head_[static_cast<std::size_t>(u)]; a >= 0; a = arcs_[static_cast<std::size_t>(a)].next) {
                const Arc &arc = arcs_[static_cast<std::size_t>(a)];
                // backward: u is reachable-to-t through arc (to -> u) if its reverse has capacity
                const int cap = forward ? arc.cap : arcs_[static_cast<std::size_t>(a ^ 1)].cap;
                if (cap > 0 && !seen[static_cast<std::size_t>(arc.to)]) {
                    seen[static_cast<std::size_t>(arc.to)] = 1;
                    stack.push_back(arc.to);
                }
            }
        }
        return seen;
    }

   private:
    struct Arc {
        int to;
        int cap;
        int next;
    };
    std::vector<int> head_;
    std::vector<Arc> arcs_;
};

struct CutSide {
    std::vector<char> tail;
    int value = 0;
};

CutSide min_cut(const Graph &g, const std::vector<int> &tail_pins, const std::vector<int> &head_pins,
                bool maximal_tail) {
    const int n = g.vertex_count;
    const int s = n;
    const int t = n + 1;
    constexpr int kInf = 1 << 28;
    MaxFlow mf(n + 2);
    for (const auto &[e, w] : g.edges) {
        mf.add_edge(e.first, e.second, w, w);
    }
    for (int v : tail_pins) {
        mf.add_edge(s, v, kInf, 0);
    }
    for (int v : head_pins) {
        mf.add_edge(v, t, kInf, 0);
    }
    CutSide out;
    out.value = mf.run(s, t);
    out.tail.assign(static_cast<std::size_t>(n), 0);
    if (maximal_tail) {
        const auto to_sink = mf.residual_reach(t, false);
        for (int v = 0; v < n; ++v) {
            out.tail[static_cast<std::size_t>(v)] = to_sink[static_cast<std::size_t>(v)] ? 0 : 1;
        }
    } else {
        const auto from_source = mf.residual_reach(s, true);
        for (int v = 0; v < n; ++v) {
            out.tail[static_cast<std::size_t>(v)] = from_source[static_cast<std::size_t>(v)];
        }
    }
    return out;
}

struct Pins {
    std::vector<int> tail;
    std::vector<int> head;
};

Pins first_cut_pins(const TensorNetwork &tn) {
    Pins p;
    std::vector<char> is_tail(tn.nodes.size(), 0);
    for (auto [q, idx] : tn.open_output_indices) {
        is_tail[static_cast<std::size_t>(tn.index_endpoints.at(idx).front())] = 1;
    }
    std::vector<char> is_head(tn.nodes.size(), 0);
    for (auto [q, node] : tn.output_nodes) {
        if (tn.open_output_indices.count(q) == 0 && !is_tail[static_cast<std::size_t>(node)]) {
            is_head[static_cast<std::size_t>(node)] = 1;
        }
    }
    for (int v = 0; v < tn.node_count(); ++v) {
        if (is_tail[static_cast<std::size_t>(v)]) p.tail.push_back(v);
        if (is_head[static_cast<std::size_t>(v)]) p.head.push_back(v);
    }
    return p;
}

// ---------------------------------------------------------------- greedy

struct Active {
    int handle;
    int key;
    std::vector<int> boundary;
};

struct GreedyResult {
    int handle = -1;
    int max_space = 0;
    int max_time = 0;
};

GreedyResult greedy_build(TreeBuilder &b, const TensorNetwork &tn, const std::vector<int> &nodes) {
    GreedyResult r;
    std::vector<Active> act;
    int next_key = tn.node_count();
    for (int v : nodes) {
        auto idx = tn.nodes[static_cast<std::size_t>(v)].indices;
        std::sort(idx.begin(), idx.end());
        r.max_space = std::max(r.max_space, static_cast<int>(idx.size()));
        act.push_back({b.leaf(v), v, std::move(idx)});
    }
    std::vector<int> merged;
    std::vector<int> shared;
    while (act.size() > 1) {
        using Key = std::tuple<int, int, int, int>;
        std::optional<Key> best;
        std::size_t bi = 0, bj = 0;
        for (int pass = 0; pass < 2 && !best; ++pass) {
            for (std::size_t i = 0; i < act.size(); ++i) {
                for (std::size_t j = i + 1; j < act.size(); ++j) {
                    const auto &x = act[i].boundary;
                    const auto &y = act[j].boundary;
                    shared.clear();
                    std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(shared));
                    if (pass == 0 && shared.empty()) {
                        continue;
                    }
                    const int ns = static_cast<int>(shared.size());
                    const int rank = static_cast<int>(x.size() + y.size()) - 2 * ns;
                    const int time = static_cast<int>(x.size() + y.size()) - ns;
                    const Key k{rank, time, std::min(act[i].key, act[j].key), std::max(act[i].key, act[j].key)};
                    if (!best || k < *best) {
                        best = k;
                        bi = i;
                        bj = j;
                    }
                }
            }
        }
        merged.clear();
        std::set_symmetric_difference(act[bi].boundary.begin(), act[bi].boundary.end(), act[bj].boundary.begin(),
                                      act[bj].boundary.end(), std::back_inserter(merged));
        r.max_space = std::max(r.max_space, std::get<0>(*best));
        r.max_time = std::max(r.max_time, std::get<1>(*best));
        Active m{b.join(act[bi].handle, act[bj].handle), next_key++, merged};
        act.erase(act.begin() + static_cast<std::ptrdiff_t>(bj));
        act[bi] = std::move(m);
    }
    r.handle = act.front().handle;
    return r;
}

// ---------------------------------------------------------------- bipartition

struct PartitionScore {
    double violation = 0;
    double cost = 0;
    int diff = 0;
    bool operator<(const PartitionScore &o) const {
        return std::tie(violation, cost, diff) < std::tie(o.violation, o.cost, o.diff);
    }
};

class Partitioner {
   public:
    Partitioner(const TensorNetwork &tn, const PartitionConstraints &cons)
        : tn_(tn), cons_(cons), g_(network_graph(tn)), adj_(g_.adjacency()),
          member_(static_cast<std::size_t>(g_.vertex_count), 0) {
    }

    // Returns the tree handle and updates the worst cap violation seen.
    int build(TreeBuilder &b, const std::vector<int> &s, std::uint64_t seed) {
        if (s.size() <= static_cast<std::size_t>(cons_.leaf_limit) || s.size() <= 2) {
            TreeBuilder trial;
            const GreedyResult gr = greedy_build(trial, tn_, s);
            const bool ok = gr.max_space <= cons_.max_space && gr.max_time <= cons_.max_time;
            if (ok || s.size() <= 2) {
                return greedy_build(b, tn_, s).handle;
            }
        }
        auto [a, c] = bipartition(s, seed);
        const int ha = build(b, a, hash_combine(seed, 1));
        const int hc = build(b, c, hash_combine(seed, 2));
        return b.join(ha, hc);
    }

    std::pair<std::vector<int>, std::vector<int>> bipartition(const std::vector<int> &s, std::uint64_t seed) {
        for (int v : s) member_[static_cast<std::size_t>(v)] = 1;
        prepare(s);
        std::vector<int> best_side;
        PartitionScore best_score;
        double eps = cons_.imbalance;
        int tries = 0;
        while (tries < cons_.max_restarts) {
            for (int r = 0; r < cons_.restarts && tries < cons_.max_restarts; ++r, ++tries) {
                std::mt19937_64 rng(hash_combine(seed, static_cast<std::uint64_t>(tries)));
                std::vector<int> side = initial(s, rng);
                const PartitionScore sc = refine(s, side, eps);
                if (best_side.empty() || sc < best_score) {
                    best_score = sc;
                    best_side = side;
                }
            }
            if (best_score.violation == 0) {
                break;
            }
            eps = std::min(0.9, eps * 1.5);
        }
        for (int v : s) member_[static_cast<std::size_t>(v)] = 0;
        std::vector<int> a, c;
        for (std::size_t k = 0; k < s.size(); ++k) {
            (best_side[k] ? c : a).push_back(s[k]);
        }
        return {a, c};
    }

   private:
    // Local view of the subgraph: positions, internal adjacency, external leg counts.
    void prepare(const std::vector<int> &s) {
        pos_.clear();
        for (std::size_t k = 0; k < s.size(); ++k) pos_[s[k]] = static_cast<int>(k);
        local_adj_.assign(s.size(), {});
        out_.assign(s.size(), 0);
        ext_s_ = 0;
        for (std::size_t k = 0; k < s.size(); ++k) {
            const int v = s[k];
            int out = g_.dangling[static_cast<std::size_t>(v)];
            for (auto [u, w] : adj_[static_cast<std::size_t>(v)]) {
                if (member_[static_cast<std::size_t>(u)]) {
                    local_adj_[k].emplace_back(pos_.at(u), w);
                } else {
                    out += w;
                }
            }
            out_[k] = out;
            ext_s_ += out;
        }
    }

    std::vector<int> initial(const std::vector<int> &s, std::mt19937_64 &rng) {
        const std::size_t n = s.size();
        std::vector<int> side(n, 1);
        std::vector<char> seen(n, 0);
        std::size_t grown = 0;
        const std::size_t target = n / 2;
        std::deque<int> q;
        while (grown < target) {
            if (q.empty()) {
                std::vector<int> fresh;
                for (std::size_t k = 0; k < n; ++k) {
                    if (!seen[k]) fresh.push_back(static_cast<int>(k));
                }
                const int start = fresh[static_cast<std::size_t>(rng() % fresh.size())];
                seen[static_cast<std::size_t>(start)] = 1;
                q.push_back(start);
            }
            const int v = q.front();
            q.pop_front();
            side[static_cast<std::size_t>(v)] = 0;
            ++grown;
            for (auto [u, w] : local_adj_[static_cast<std::size_t>(v)]) {
                if (!seen[static_cast<std::size_t>(u)]) {
                    seen[static_cast<std::size_t>(u)] = 1;
                    q.push_back(u);
                }
            }
        }
        return side;
    }

    struct State {
        int cut = 0;
        int size[2] = {0, 0};
        int out[2] = {0, 0};
    };

    PartitionScore score(const State &st, std::size_t n, double eps) const {
        PartitionScore p;
        const int ext_a = st.out[0] + st.cut;
        const int ext_b = st.out[1] + st.cut;
        p.violation = std::max(0, ext_a - cons_.max_space) + std::max(0, ext_b - cons_.max_space) +
                      std::max(0, ext_s_ + st.cut - cons_.max_time);
        const double limit = (1.0 + eps) * static_cast<double>(n) / 2.0;
        const double excess = std::max(0.0, static_cast<double>(std::max(st.size[0], st.size[1])) - limit);
        p.cost = st.cut + excess;
        p.diff = std::abs(st.size[0] - st.size[1]);
        return p;
    }

    // Fiduccia-Mattheyses passes with rollback to the best prefix.
    PartitionScore refine(const std::vector<int> &s, std::vector<int> &side, double eps) {
        const std::size_t n = s.size();
        State st;
        std::vector<int> gain(n, 0);
        for (std::size_t k = 0; k < n; ++k) {
            st.size[side[k]] += 1;
            st.out[side[k]] += out_[k];
            for (auto [u, w] : local_adj_[k]) {
                if (side[static_cast<std::size_t>(u)] != side[k]) {
                    gain[k] += w;
                    if (static_cast<std::size_t>(u) > k) st.cut += w;
                } else {
                    gain[k] -= w;
                }
            }
        }
        PartitionScore cur = score(st, n, eps);
        for (int pass = 0; pass < 16; ++pass) {
            std::vector<char> locked(n, 0);
            std::vector<int> moves;
            PartitionScore best = cur;
            std::size_t best_len = 0;
            for (std::size_t step = 0; step < n; ++step) {
                int pick = -1;
                PartitionScore pick_score;
                for (std::size_t k = 0; k < n; ++k) {
                    if (locked[k] || st.size[side[k]] <= 1) continue;
                    State nx = st;
                    nx.cut -= gain[k];
                    nx.size[side[k]] -= 1;
                    nx.size[1 - side[k]] += 1;
                    nx.out[side[k]] -= out_[k];
                    nx.out[1 - side[k]] += out_[k];
                    const PartitionScore sc = score(nx, n, eps);
                    if (pick < 0 || sc < pick_score) {
                        pick = static_cast<int>(k);
                        pick_score = sc;
                    }
                }
                if (pick < 0) break;
                move(static_cast<std::size_t>(pick), side, gain, st);
                locked[static_cast<std::size_t>(pick)] = 1;
                moves.push_back(pick);
                if (pick_score < best) {
                    best = pick_score;
                    best_len = moves.size();
                }
            }
            for (std::size_t m = moves.size(); m > best_len; --m) {
                move(static_cast<std::size_t>(moves[m - 1]), side, gain, st);
            }
            if (best_len == 0) break;
            cur = best;
        }
        return cur;
    }

    void move(std::size_t k, std::vector<int> &side, std::vector<int> &gain, State &st) const {
        const int from = side[k];
        st.cut -= gain[k];
        st.size[from] -= 1;
        st.size[1 - from] += 1;
        st.out[from] -= out_[k];
        st.out[1 - from] += out_[k];
        side[k] = 1 - from;
        gain[k] = -gain[k];
        for (auto [u, w] : local_adj_[k]) {
            gain[static_cast<std::size_t>(u)] += side[static_cast<std::size_t>(u)] == from ? 2 * w : -2 * w;
        }
    }

    const TensorNetwork &tn_;
    const PartitionConstraints &cons_;
    Graph g_;
    std::vector<std::vector<std::pair<int, int>>> adj_;
    std::vector<char> member_;
    std::map<int, int> pos_;
    std::vector<std::vector<std::pair<int, int>>> local_adj_;
    std::vector<int> out_;
    int ext_s_ = 0;
};

int cap_violation(const TensorNetwork &tn, const ContractionTree &tree, const PartitionConstraints &cons,
                  std::string *what) {
    const Complexity cx = complexity_of(tn, tree);
    int v = std::max(0, cx.sc - cons.max_space);
    int worst_time = 0;
    for (const auto &c : cx.per_step) {
        worst_time = std::max(worst_time, c.log2_time());
        v += std::max(0, c.log2_time() - cons.max_time);
    }
    if (what != nullptr && v > 0) {
        *what = "largest tensor 2^" + std::to_string(cx.sc) + " (cap 2^" + std::to_string(cons.max_space) +
                "), costliest step 2^" + std::to_string(worst_time) + " (cap 2^" + std::to_string(cons.max_time) + ")";
    }
    return v;
}

}  // namespace

FirstCut find_first_cut(const TensorNetwork &tn, const PartitionConstraints &cons, bool maximal_tail) {
    FirstCut fc;
    const Pins pins = first_cut_pins(tn);
    if (pins.tail.empty()) {
        fc.head.resize(static_cast<std::size_t>(tn.node_count()));
        std::iota(fc.head.begin(), fc.head.end(), 0);
        return fc;
    }
    const Graph g = network_graph(tn);
    const CutSide side = min_cut(g, pins.tail, pins.head, maximal_tail);
    for (int v = 0; v < tn.node_count(); ++v) {
        (side.tail[static_cast<std::size_t>(v)] ? fc.tail : fc.head).push_back(v);
    }
    fc.n_c = side.value;
    if (cons.max_cut && fc.n_c > *cons.max_cut) {
        throw Error(Errc::infeasible_cut, "smallest first cut crosses " + std::to_string(fc.n_c) +
                                              " indices, above max_cut " + std::to_string(*cons.max_cut));
    }
    return fc;
}

ContractionTree greedy_order(const TensorNetwork &tn, const std::vector<int> &nodes) {
    std::vector<int> sorted = nodes;
    std::sort(sorted.begin(), sorted.end());
    TreeBuilder b;
    const GreedyResult r = greedy_build(b, tn, sorted);
    return b.finish(r.handle);
}

ContractionTree refine_subtrees(const TensorNetwork &tn, const ContractionTree &tree, int max_pieces, int rounds) {
    return detail::refine_tree(tn, tree, {}, max_pieces, rounds, std::nullopt);
}

ContractionTree hierarchical_partition(const TensorNetwork &tn, const PartitionConstraints &cons) {
    if (cons.leaf_limit < 1 || cons.max_space < 1 || cons.max_time < 1) {
        throw Error(Errc::config_mismatch, "leaf_limit and caps must be positive");
    }
    if (tn.node_count() == 0) {
        throw Error(Errc::config_mismatch, "network has no tensors");
    }
    const FirstCut minimal = find_first_cut(tn, cons, false);
    std::vector<FirstCut> cuts{minimal};
    const FirstCut maximal = find_first_cut(tn, cons, true);
    if (maximal.tail != minimal.tail) {
        cuts.push_back(maximal);
    }
    std::optional<ContractionTree> best;
    int best_violation = 0;
    double best_tc = 0;
    std::string best_what;
    static constexpr double kBalance[] = {1.0, 2.0, 0.5, 3.0};
    for (int trial = 0; trial < std::max(1, cons.trials); ++trial) {
        // Later attempts partition under tighter internal caps, which tends to
        // find cheaper trees; every result is judged against the real caps.
        PartitionConstraints tc_cons = cons;
        tc_cons.imbalance = std::min(0.9, cons.imbalance * kBalance[trial % 4]);
        tc_cons.max_space = std::max(1, cons.max_space - 4 * trial);
        tc_cons.max_time = std::max(1, cons.max_time - 4 * trial);
        Partitioner part(tn, tc_cons);
        for (std::size_t k = 0; k < cuts.size(); ++k) {
            const FirstCut &fc = cuts[k];
            TreeBuilder b;
            std::optional<int> h, t;
            const std::uint64_t seed = hash_combine(hash_combine(cons.rng_seed, k), static_cast<std::uint64_t>(trial));
            if (!fc.head.empty()) h = part.build(b, fc.head, hash_combine(seed, 0x68656164));
            if (!fc.tail.empty()) t = part.build(b, fc.tail, hash_combine(seed, 0x7461696c));
            const int root = (h && t) ? b.join(*h, *t) : (h ? *h : *t);
            ContractionTree tree = b.finish(root, h, t);
            if (cons.refine_pieces > 0) {
                tree = refine_subtrees(tn, tree, cons.refine_pieces);
            }
            std::string what;
            const int v = cap_violation(tn, tree, cons, &what);
            const double tc = complexity_of(tn, tree).tc;
            if (!best || v < best_violation || (v == best_violation && tc < best_tc)) {
                best = std::move(tree);
                best_violation = v;
                best_tc = tc;
                best_what = what;
            }
            if (v == 0) break;
        }
    }
    if (best_violation > 0) {
        throw BudgetExhausted("hierarchical_partition", best_what, *best);
    }
    return *best;
}

namespace {

bool imbalanced(int rank_a, int rank_b, double log2_thr) {
    const int lo = std::min(rank_a, rank_b);
    const int hi = std::max(rank_a, rank_b);
    return static_cast<double>(lo) < static_cast<double>(hi) + log2_thr;
}

}  // namespace

int imbalanced_steps(const TensorNetwork &tn, const ContractionTree &tree, double threshold) {
    const auto b = boundary_sets(tn, tree);
    const double lt = std::log2(threshold);
    int count = 0;
    for (const auto &s : tree.steps) {
        if (imbalanced(static_cast<int>(b[static_cast<std::size_t>(s.lhs)].size()),
                       static_cast<int>(b[static_cast<std::size_t>(s.rhs)].size()), lt)) {
            ++count;
        }
    }
    return count;
}

ContractionTree branch_merge(const TensorNetwork &tn, const ContractionTree &tree, double threshold) {
    const double lt = std::log2(threshold);
    ContractionTree cur = tree;
    int stat = imbalanced_steps(tn, cur, threshold);
    bool changed = true;
    int budget = 4 * static_cast<int>(tree.steps.size()) + 4;
    while (changed && budget-- > 0) {
        changed = false;
        const auto bset = boundary_sets(tn, cur);
        auto rank = [&](int id) { return static_cast<int>(bset[static_cast<std::size_t>(id)].size()); };
        const auto fc = cur.first_cut();
        for (std::size_t xi = 0; xi < cur.steps.size() && !changed; ++xi) {
            if (fc && static_cast<int>(xi) == *fc) continue;
            const auto &x = cur.steps[xi];
            for (int side = 0; side < 2 && !changed; ++side) {
                const int p = side == 0 ? x.lhs : x.rhs;
                const int s2 = side == 0 ? x.rhs : x.lhs;
                if (cur.is_leaf(p)) continue;
                const auto &ps = cur.step_of(p);
                for (int inner = 0; inner < 2 && !changed; ++inner) {
                    const int big = inner == 0 ? ps.lhs : ps.rhs;
                    const int s1 = inner == 0 ? ps.rhs : ps.lhs;
                    const double rb = rank(big);
                    if (!(rank(s1) < rb + lt && rank(s2) < rb + lt)) continue;
                    const auto &a = bset[static_cast<std::size_t>(s1)];
                    const auto &c = bset[static_cast<std::size_t>(s2)];
                    std::vector<int> merged;
                    std::set_symmetric_difference(a.begin(), a.end(), c.begin(), c.end(), std::back_inserter(merged));
                    if (static_cast<int>(merged.size()) >= rank(big)) continue;
                    // Rebuild with x replaced by (big, (s1, s2)).
                    std::vector<int> handle(static_cast<std::size_t>(cur.size()), -1);
                    TreeBuilder nb;
                    for (int k = 0; k < cur.leaf_count(); ++k) {
                        handle[static_cast<std::size_t>(k)] = nb.leaf(cur.leaves[static_cast<std::size_t>(k)]);
                    }
                    for (std::size_t si = 0; si < cur.steps.size(); ++si) {
                        const auto &st = cur.steps[si];
                        int h;
                        if (si == xi) {
                            const int small = nb.join(handle[static_cast<std::size_t>(s1)],
                                                      handle[static_cast<std::size_t>(s2)]);
                            h = nb.join(handle[static_cast<std::size_t>(big)], small);
                        } else if (st.out_id == p) {
                            h = -1;  // absorbed into the rotation
                        } else {
                            h = nb.join(handle[static_cast<std::size_t>(st.lhs)], handle[static_cast<std::size_t>(st.rhs)]);
                        }
                        handle[static_cast<std::size_t>(st.out_id)] = h;
                    }
                    std::optional<int> nh, nt;
                    if (cur.head_root) nh = handle[static_cast<std::size_t>(*cur.head_root)];
                    if (cur.tail_root) nt = handle[static_cast<std::size_t>(*cur.tail_root)];
                    ContractionTree cand = nb.finish(handle[static_cast<std::size_t>(cur.root())], nh, nt);
                    const int cs = imbalanced_steps(tn, cand, threshold);
                    if (cs < stat) {
                        cur = std::move(cand);
                        stat = cs;
                        changed = true;
                    }
                }
            }
        }
    }
    return cur;
}

OpenQubitChoice choose_open_qubits(const Circuit &c, int n_open, const PartitionConstraints &cons) {
    const int n = c.num_qubits();
    if (n_open < 0 || n_open > n) {
        throw Error(Errc::config_mismatch, "cannot open " + std::to_string(n_open) + " of " + std::to_string(n) +
                                               " qubits");
    }
    std::set<int> all(c.layout.ids.begin(), c.layout.ids.end());
    const TensorNetwork topo = build_network(c, all, {});
    const Graph g = network_graph(topo);

    auto evaluate = [&](const std::set<int> &open) {
        std::vector<char> tail_pin(static_cast<std::size_t>(g.vertex_count), 0);
        for (int q : open) tail_pin[static_cast<std::size_t>(topo.output_nodes.at(q))] = 1;
        std::vector<int> tp, hp;
        for (auto [q, node] : topo.output_nodes) {
            if (open.count(q) == 0 && !tail_pin[static_cast<std::size_t>(node)]) hp.push_back(node);
        }
        for (int v = 0; v < g.vertex_count; ++v) {
            if (tail_pin[static_cast<std::size_t>(v)]) tp.push_back(v);
        }
        const CutSide cs = min_cut(g, tp, hp, false);
        const int tail = static_cast<int>(std::count(cs.tail.begin(), cs.tail.end(), 1));
        return std::pair<int, int>{cs.value, tail};
    };

    std::vector<int> seeds;
    if (n <= 16) {
        seeds = c.layout.ids;
    } else {
        std::mt19937_64 rng(cons.rng_seed);
        std::vector<int> pool = c.layout.ids;
        std::shuffle(pool.begin(), pool.end(), rng);
        seeds.assign(pool.begin(), pool.begin() + 8);
        std::sort(seeds.begin(), seeds.end());
    }
    std::optional<OpenQubitChoice> best;
    if (n_open == 0) {
        return OpenQubitChoice{};
    }
    for (int seed : seeds) {
        std::set<int> open{seed};
        auto [nc, tail] = evaluate(open);
        while (static_cast<int>(open.size()) < n_open) {
            std::optional<std::tuple<int, int, int>> pick;
            for (int q : c.layout.ids) {
                if (open.count(q) != 0) continue;
                open.insert(q);
                auto [v, t] = evaluate(open);
                open.erase(q);
                const std::tuple<int, int, int> key{v, t, q};
                if (!pick || key < *pick) pick = key;
            }
            open.insert(std::get<2>(*pick));
            nc = std::get<0>(*pick);
            tail = std::get<1>(*pick);
        }
        OpenQubitChoice ch{std::vector<int>(open.begin(), open.end()), nc, tail};
        if (!best || std::tie(ch.n_c, ch.tail_size) < std::tie(best->n_c, best->tail_size)) {
            best = std::move(ch);
        }
    }
    return *best;
}

}  // namespace bighead
