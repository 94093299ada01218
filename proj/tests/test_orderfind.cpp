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


#include <gtest/gtest.h>

#include <bit>
#include <numeric>
#include <random>

#include "bighead/orderfind.hpp"
#include "bighead/slicer.hpp"
#include "support.hpp"

namespace bighead {
namespace {

std::vector<int> all_nodes(const TensorNetwork &tn) {
    std::vector<int> v(static_cast<std::size_t>(tn.node_count()));
    std::iota(v.begin(), v.end(), 0);
    return v;
}

// Brute-force minimum first cut: enumerate every side assignment of the
// unpinned nodes.
int brute_force_cut(const TensorNetwork &tn) {
    const Graph g = network_graph(tn);
    std::vector<int> forced(static_cast<std::size_t>(g.vertex_count), -1);
    for (auto [q, idx] : tn.open_output_indices) forced[static_cast<std::size_t>(tn.index_endpoints.at(idx)[0])] = 1;
    for (auto [q, node] : tn.output_nodes) {
        if (tn.open_output_indices.count(q) == 0 && forced[static_cast<std::size_t>(node)] != 1) {
            forced[static_cast<std::size_t>(node)] = 0;
        }
    }
    std::vector<int> free;
    for (int v = 0; v < g.vertex_count; ++v) {
        if (forced[static_cast<std::size_t>(v)] < 0) free.push_back(v);
    }
    int best = INT32_MAX;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free.size()); ++mask) {
        std::vector<int> side = forced;
        for (std::size_t k = 0; k < free.size(); ++k) side[static_cast<std::size_t>(free[k])] = (mask >> k) & 1U;
        int cut = 0;
        for (auto [e, w] : g.edges) cut += side[static_cast<std::size_t>(e.first)] != side[static_cast<std::size_t>(e.second)] ? w : 0;
        best = std::min(best, cut);
    }
    return best;
}

// Optimal total cost over all contraction trees by subset DP.
double exhaustive_tc(const TensorNetwork &tn) {
    const int n = tn.node_count();
    const std::uint32_t full = (1U << n) - 1;
    std::map<int, std::uint32_t> owners;
    for (int v = 0; v < n; ++v) {
        for (int i : tn.nodes[static_cast<std::size_t>(v)].indices) owners[i] |= 1U << v;
    }
    auto boundary = [&](std::uint32_t s) {
        int b = 0;
        for (auto [i, own] : owners) {
            if ((own & s) != 0 && ((own & ~s) != 0 || tn.is_open_index(i))) ++b;
        }
        return b;
    };
    std::vector<double> cost(full + 1, 0.0);
    std::vector<int> bnd(full + 1);
    for (std::uint32_t s = 1; s <= full; ++s) bnd[s] = boundary(s);
    for (std::uint32_t s = 1; s <= full; ++s) {
        if (std::popcount(s) < 2) continue;
        double best = INFINITY;
        for (std::uint32_t a = (s - 1) & s; a > 0; a = (a - 1) & s) {
            const std::uint32_t b = s ^ a;
            if (a < b) continue;
            // |idx(A) u idx(B)| = (bnd A + bnd B + bnd S) / 2
            const int log_t = (bnd[a] + bnd[b] + bnd[s]) / 2;
            best = std::min(best, cost[a] + cost[b] + std::ldexp(1.0, log_t));
        }
        cost[s] = best;
    }
    return cost[full];
}

TEST(FirstCut, MatchesBruteForce) {
    std::mt19937_64 rng(17);
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 40 && checked < 12; ++seed) {
        const Circuit c = random_circuit(8, 5 + static_cast<int>(seed % 2), seed);
        const auto open = testing::random_subset(rng, c.layout.ids, 3);
        const TensorNetwork tn = build_network(c, open, testing::random_bits(rng, 5));
        if (tn.node_count() > 18) continue;
        PartitionConstraints cons;
        for (bool maximal : {false, true}) {
            const FirstCut fc = find_first_cut(tn, cons, maximal);
            EXPECT_EQ(fc.n_c, brute_force_cut(tn)) << "seed " << seed;
            EXPECT_EQ(fc.head.size() + fc.tail.size(), static_cast<std::size_t>(tn.node_count()));
        }
        const FirstCut lo = find_first_cut(tn, cons, false);
        const FirstCut hi = find_first_cut(tn, cons, true);
        EXPECT_LE(lo.tail.size(), hi.tail.size());
        ++checked;
    }
    EXPECT_GE(checked, 8);
}

TEST(FirstCut, TwoQubitPathCutsOneBond) {
    // 1-qubit gates fuse into the CZ, so the single open leg sits on it; the
    // cut weight is the bond to the next tensor on the closed qubit.
    const Circuit c = parse_circuit("3\n0 cz 0 1\n1 cz 1 2\n", CircuitFormat::qsim_text);
    const TensorNetwork tn = build_network(c, std::vector<int>{0}, "00");
    const FirstCut fc = find_first_cut(tn, {});
    EXPECT_EQ(fc.n_c, 1);
    EXPECT_EQ(fc.tail.size(), 1u);
}

TEST(FirstCut, MaxCutIsEnforced) {
    const Circuit c = random_circuit(8, 8, 2);
    const TensorNetwork tn = build_network(c, std::vector<int>{0}, "0000000");
    ASSERT_EQ(find_first_cut(tn, {}).n_c, 2);
    PartitionConstraints cons;
    cons.max_cut = 1;
    EXPECT_EQ(testing::error_of([&] { find_first_cut(tn, cons); }), Errc::infeasible_cut);
    EXPECT_EQ(testing::error_of([&] { hierarchical_partition(tn, cons); }), Errc::infeasible_cut);
}

TEST(FirstCut, FullyClosedNetworkIsAllHead) {
    const Circuit c = random_circuit(5, 3, 1);
    const TensorNetwork tn = build_network(c, std::vector<int>{}, "00000");
    const FirstCut fc = find_first_cut(tn, {});
    EXPECT_EQ(fc.n_c, 0);
    EXPECT_TRUE(fc.tail.empty());
    const ContractionTree tree = hierarchical_partition(tn, {});
    EXPECT_TRUE(tree.head_root.has_value());
    EXPECT_FALSE(tree.tail_root.has_value());
    EXPECT_FALSE(tree.first_cut().has_value());
}

TEST(GreedyOrder, WithinSixteenTimesOfOptimum) {
    std::mt19937_64 rng(8);
    int checked = 0;
    for (std::uint64_t seed = 0; checked < 6 && seed < 40; ++seed) {
        const Circuit c = random_circuit(6, 4 + static_cast<int>(seed % 2), seed);
        const auto open = testing::random_subset(rng, c.layout.ids, 2);
        const TensorNetwork tn = build_network(c, open, testing::random_bits(rng, 4));
        if (tn.node_count() < 6 || tn.node_count() > 10) continue;
        const double opt = exhaustive_tc(tn);
        const ContractionTree g = greedy_order(tn, all_nodes(tn));
        const double greedy = complexity_of(tn, g).tc;
        EXPECT_GE(greedy, opt);
        EXPECT_LE(greedy, 16.0 * opt) << "seed " << seed;
        const ContractionTree r = refine_subtrees(tn, g, 12);
        const Complexity rc = complexity_of(tn, r);
        EXPECT_GE(rc.tc, opt);
        EXPECT_LE(rc.tc, greedy);
        EXPECT_LE(rc.sc, complexity_of(tn, g).sc);
        ++checked;
    }
    EXPECT_EQ(checked, 6);
}

TEST(GreedyOrder, ThreeNodeChain) {
    TensorNetwork tn;
    tn.layout = QubitLayout::contiguous(0);
    // a wide middle tensor: joining an end first is cheapest
    tn.nodes.push_back({0, {0, 1}, std::vector<cplx>(4, 1.0), {}});
    tn.nodes.push_back({1, {1, 2, 3, 4}, std::vector<cplx>(16, 1.0), {}});
    tn.nodes.push_back({2, {2, 3, 4, 5}, std::vector<cplx>(16, 1.0), {}});
    tn.open_output_indices = {{0, 0}, {1, 5}};
    tn.index_endpoints = compute_index_endpoints(tn.nodes);
    const ContractionTree t = greedy_order(tn, {0, 1, 2});
    EXPECT_NO_THROW(check_tree(tn, t));
    EXPECT_DOUBLE_EQ(complexity_of(tn, t).tc, exhaustive_tc(tn));
}

TEST(HierarchicalPartition, RespectsCapsAndContractsCorrectly) {
    const Circuit c = random_circuit(10, 10, 5);
    const TensorNetwork tn = build_network(c, std::vector<int>{0, 1, 2}, "0110100");
    ASSERT_GE(tn.node_count(), 30);
    PartitionConstraints cons;
    cons.max_space = 14;
    cons.max_time = 20;
    cons.leaf_limit = 6;
    const ContractionTree tree = hierarchical_partition(tn, cons);
    EXPECT_NO_THROW(check_tree(tn, tree));
    EXPECT_NO_THROW(check_first_cut(tn, tree));
    const Complexity cx = complexity_of(tn, tree);
    EXPECT_LE(cx.sc, 14);
    for (const auto &s : cx.per_step) {
        EXPECT_LE(s.log2_space(), 14);
        EXPECT_LE(s.log2_time(), 20);
    }
    EXPECT_EQ(cut_size(tn, tree), find_first_cut(tn, cons).n_c);
    std::vector<int> order;
    for (auto [q, i] : tn.open_output_indices) order.push_back(i);
    const auto t = permute(contract_tree<double>(tn, tree, {}), order);
    const auto expected = testing::naive_contract(tn);
    for (std::size_t k = 0; k < expected.size(); ++k) EXPECT_LT(std::abs(t.data[k] - expected[k]), 1e-12);
}

TEST(HierarchicalPartition, DeterministicPerSeed) {
    const Circuit c = random_circuit(9, 8, 7);
    const TensorNetwork tn = build_network(c, std::vector<int>{3, 4}, "0000000");
    PartitionConstraints cons;
    cons.leaf_limit = 5;
    cons.rng_seed = 11;
    EXPECT_EQ(hierarchical_partition(tn, cons), hierarchical_partition(tn, cons));
}

TEST(HierarchicalPartition, ImpossibleCapsReportBestTree) {
    const Circuit c = random_circuit(8, 8, 1);
    const TensorNetwork tn = build_network(c, std::vector<int>{0}, "0000000");
    PartitionConstraints cons;
    cons.max_space = 3;
    cons.trials = 1;
    try {
        hierarchical_partition(tn, cons);
        FAIL() << "expected BudgetExhausted";
    } catch (const BudgetExhausted &e) {
        EXPECT_EQ(e.code(), Errc::budget_exhausted);
        EXPECT_NO_THROW(check_tree(tn, e.best()));
    }
}

TEST(BranchMerge, KeepsResultAndReducesImbalance) {
    const Circuit c = random_circuit(8, 8, 3);
    const TensorNetwork tn = build_network(c, std::vector<int>{0, 1}, "000000");
    PartitionConstraints cons;
    cons.leaf_limit = 4;
    const ContractionTree tree = hierarchical_partition(tn, cons);
    const ContractionTree merged = branch_merge(tn, tree, 0.25);
    EXPECT_NO_THROW(check_tree(tn, merged));
    EXPECT_LE(imbalanced_steps(tn, merged, 0.25), imbalanced_steps(tn, tree, 0.25));
    EXPECT_EQ(cut_size(tn, merged), cut_size(tn, tree));
    std::vector<int> order;
    for (auto [q, i] : tn.open_output_indices) order.push_back(i);
    const auto a = permute(contract_tree<double>(tn, tree, {}), order);
    const auto b = permute(contract_tree<double>(tn, merged, {}), order);
    for (std::size_t k = 0; k < a.data.size(); ++k) EXPECT_LT(std::abs(a.data[k] - b.data[k]), 1e-12);
}

TEST(BranchMerge, BalancedTreeUnchanged) {
    TensorNetwork tn;
    tn.layout = QubitLayout::contiguous(0);
    for (int k = 0; k < 4; ++k) tn.nodes.push_back({k, {k, (k + 1) % 4}, std::vector<cplx>(4, 1.0), {}});
    tn.index_endpoints = compute_index_endpoints(tn.nodes);
    TreeBuilder b;
    const int root = b.join(b.join(b.leaf(0), b.leaf(1)), b.join(b.leaf(2), b.leaf(3)));
    const ContractionTree tree = b.finish(root);
    EXPECT_EQ(imbalanced_steps(tn, tree, 0.5), 0);
    EXPECT_EQ(branch_merge(tn, tree, 0.5), tree);
}

TEST(RefineSubtrees, KeepsFirstCutAndNeverWorsens) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const Circuit c = random_circuit(10, 10, seed);
        const TensorNetwork tn = build_network(c, std::vector<int>{0, 1, 2, 3}, "000000");
        PartitionConstraints cons;
        cons.refine_pieces = 0;
        cons.rng_seed = seed;
        const ContractionTree tree = hierarchical_partition(tn, cons);
        const ContractionTree r = refine_subtrees(tn, tree, 8);
        EXPECT_NO_THROW(check_tree(tn, r));
        EXPECT_NO_THROW(check_first_cut(tn, r));
        const Complexity before = complexity_of(tn, tree);
        const Complexity after = complexity_of(tn, r);
        EXPECT_LE(after.tc, before.tc);
        EXPECT_LE(after.sc, before.sc);
        EXPECT_EQ(cut_size(tn, r), cut_size(tn, tree));
    }
}

TEST(ChooseOpenQubits, ReturnsRequestedCountWithConsistentCut) {
    const Circuit c = random_circuit(12, 8, 4);
    const OpenQubitChoice ch = choose_open_qubits(c, 4, {});
    ASSERT_EQ(ch.open.size(), 4u);
    EXPECT_TRUE(std::is_sorted(ch.open.begin(), ch.open.end()));
    const TensorNetwork tn = build_network(c, ch.open, std::string(8, '0'));
    const FirstCut fc = find_first_cut(tn, {});
    EXPECT_EQ(ch.n_c, fc.n_c);
    EXPECT_EQ(ch.tail_size, static_cast<int>(fc.tail.size()));
}

// ---------------------------------------------------------------- slicer

TEST(Slicer, NothingToDoUnderTheCap) {
    const Circuit c = random_circuit(8, 6, 1);
    const TensorNetwork tn = build_network(c, std::vector<int>{0}, "0000000");
    const ContractionTree tree = hierarchical_partition(tn, {});
    const SliceResult r = select_slices(tn, tree, SliceOptions{1000, false, SliceScope::whole_tree, 6});
    EXPECT_EQ(r.plan.n_e(), 0);
    EXPECT_EQ(r.plan.subtask_count(), 1u);
    EXPECT_EQ(r.tree, tree);
}

TEST(Slicer, MatrixTraceNeedsOneSlice) {
    // tr(A B): sc 2, and one sliced bond brings it to 1
    TensorNetwork tn;
    tn.layout = QubitLayout::contiguous(0);
    tn.nodes.push_back({0, {0, 1}, {1, 2, 3, 4}, {}});
    tn.nodes.push_back({1, {1, 0}, {5, 6, 7, 8}, {}});
    tn.index_endpoints = compute_index_endpoints(tn.nodes);
    const ContractionTree tree = greedy_order(tn, {0, 1});
    ASSERT_EQ(complexity_of(tn, tree).sc, 2);
    const SliceResult r = select_slices(tn, tree, SliceOptions{1, false, SliceScope::whole_tree, 6});
    EXPECT_EQ(r.plan.n_e(), 1);
    EXPECT_LE(r.plan.per_subtask.sc, 1);
    EXPECT_LT(sliced_equivalence_check(tn, r.tree, r.plan), 1e-12);
}

TEST(Slicer, SlicedSumMatchesUnsliced) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Circuit c = random_circuit(9, 8, seed);
        const TensorNetwork tn = build_network(c, std::vector<int>{0, 5}, "0101101");
        const ContractionTree tree = hierarchical_partition(tn, {});
        const int sc = complexity_of(tn, tree).sc;
        for (bool reconf : {false, true}) {
            const SliceResult r = select_slices(tn, tree, SliceOptions{sc - 3, reconf, SliceScope::whole_tree, 6});
            EXPECT_GE(r.plan.n_e(), 1);
            EXPECT_LE(r.plan.per_subtask.sc, sc - 3);
            EXPECT_GE(r.plan.overhead, 1.0 - 1e-12);
            EXPECT_LT(sliced_equivalence_check(tn, r.tree, r.plan), 1e-10);
            for (int i : r.plan.sliced_indices) EXPECT_FALSE(tn.is_open_index(i));
        }
    }
}

TEST(Slicer, HeadScopeOnlySlicesHeadBonds) {
    const Circuit c = random_circuit(10, 8, 2);
    const TensorNetwork tn = build_network(c, std::vector<int>{0, 1, 2}, "0000000");
    const ContractionTree tree = hierarchical_partition(tn, {});
    ASSERT_TRUE(tree.head_root);
    const int head_sc = complexity_of(tn, tree, {}, tree.head_root).sc;
    const int target = std::max(cut_size(tn, tree), head_sc - 2);
    const SliceResult r = select_slices(tn, tree, SliceOptions{target, false, SliceScope::head, 6});
    const auto bnd = boundary_sets(tn, r.tree);
    const auto &cut = bnd[static_cast<std::size_t>(*r.tree.head_root)];
    std::set<int> head_leaves;
    for (int v : r.tree.leaves_under(*r.tree.head_root)) head_leaves.insert(v);
    for (int i : r.plan.sliced_indices) {
        EXPECT_FALSE(std::binary_search(cut.begin(), cut.end(), i));
        for (int v : tn.index_endpoints.at(i)) EXPECT_TRUE(head_leaves.count(v));
    }
    EXPECT_LE(complexity_of(tn, r.tree, {r.plan.sliced_indices.begin(), r.plan.sliced_indices.end()}, r.tree.head_root).sc,
              target);
}

TEST(Slicer, OpenLegsCannotBeSliced) {
    // one tensor with three open legs can never go below rank 3
    const Circuit c = parse_circuit("3\n0 cz 0 1\n1 cz 1 2\n", CircuitFormat::qsim_text);
    const TensorNetwork tn = build_network(c, c.layout.ids, "");
    const ContractionTree tree = greedy_order(tn, all_nodes(tn));
    EXPECT_EQ(testing::error_of([&] { select_slices(tn, tree, SliceOptions{2, false, SliceScope::whole_tree, 6}); }),
              Errc::cannot_reach_cap);
}

}  // namespace
}  // namespace bighead
