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

// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "../support.hpp"
#include "bighead/cli.hpp"
#include "bighead/analytics.hpp"
#include "bighead/orderfind.hpp"
#include "bighead/slicer.hpp"

namespace bh = bighead;
using bh::cplx;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const char *name, const std::function<Outcome()> &fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = fn();
    } catch (const std::exception &e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %2d %-28s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
}

std::string fmt(const char *f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

// Random tree over all nodes: repeatedly join a random pair of live subtrees
// that share an index (any pair once none do).
bh::ContractionTree random_tree(const bh::TensorNetwork &tn, std::mt19937_64 &rng) {
    bh::TreeBuilder b;
    std::vector<std::pair<int, std::set<int>>> live;
    for (const auto &node : tn.nodes) {
        live.push_back({b.leaf(node.id), std::set<int>(node.indices.begin(), node.indices.end())});
    }
    while (live.size() > 1) {
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t i = 0; i < live.size(); ++i) {
            for (std::size_t j = i + 1; j < live.size(); ++j) {
                for (int x : live[i].second) {
                    if (live[j].second.count(x)) {
                        pairs.emplace_back(i, j);
                        break;
                    }
                }
            }
        }
        if (pairs.empty()) pairs.emplace_back(0, 1);
        const auto [i, j] = pairs[rng() % pairs.size()];
        std::set<int> merged;
        for (int x : live[i].second) {
            if (!live[j].second.count(x)) merged.insert(x);
        }
        for (int x : live[j].second) {
            if (!live[i].second.count(x)) merged.insert(x);
        }
        live[i] = {b.join(live[i].first, live[j].first), std::move(merged)};
        live.erase(live.begin() + static_cast<std::ptrdiff_t>(j));
    }
    return b.finish(live.front().first);
}

Outcome oracle_equivalence(std::uint64_t *trees_checked, std::uint64_t *cut_violations,
                           std::uint64_t *reuse_violations) {
    std::mt19937_64 rng(20260101);
    const int circuits = 200;
    double worst_d = 0, worst_s = 0;
    int bad = 0;
    for (int k = 0; k < circuits; ++k) {
        const int n = 4 + static_cast<int>(rng() % 11);
        const int m = 2 + static_cast<int>(rng() % 13);
        const bh::Circuit c = bh::random_circuit(n, m, rng());
        const bh::StateVector sv = bh::simulate(c);
        int n2 = static_cast<int>(rng() % static_cast<std::uint64_t>(std::min(n, 8) + 1));
        if (k % 10 == 0 && n <= 10) n2 = n;
        const auto open = bh::testing::random_subset(rng, c.layout.ids, n2);
        const std::string s1 = bh::testing::random_bits(rng, n - n2);
        const bh::AmplitudeTable oracle = bh::oracle_table(c, sv, open, s1);
        const double floor = std::pow(2.0, -n / 2.0);
        bh::PlanOptions po;
        po.constraints.rng_seed = rng();
        for (auto prec : {bh::Precision::dbl, bh::Precision::single}) {
            bh::RunOptions ro;
            ro.precision = prec;
            bh::EngineStats stats;
            bh::ContractionPlan plan;
            const bh::TensorNetwork tn = bh::build_network(c, open, s1);
            const bh::AmplitudeTable t = bh::testing::run_pipeline(c, open, s1, po, ro, 2, &stats, &plan);
            ++*trees_checked;
            try {
                bh::check_first_cut(tn, plan.tree);
            } catch (const bh::Error &) {
                ++*cut_violations;
            }
            const std::uint64_t expect_head = plan.tree.head_root ? plan.slices.subtask_count() : 0;
            if (stats.head_contractions != expect_head) ++*reuse_violations;
            double worst = 0;
            for (std::size_t r = 0; r < t.rows.size(); ++r) {
                worst = std::max(worst, bh::testing::rel_err(t.rows[r].amplitude, oracle.rows[r].amplitude, floor));
            }
            const double tol = prec == bh::Precision::dbl ? 1e-8 : 1e-4;
            if (!(worst <= tol) || t.rows.size() != oracle.rows.size()) ++bad;
            (prec == bh::Precision::dbl ? worst_d : worst_s) = std::max(prec == bh::Precision::dbl ? worst_d : worst_s, worst);
        }
    }
    return {bad == 0, std::to_string(circuits) + " circuits, worst rel err double " + fmt("%.2e", worst_d) +
                          " (tol 1e-8), single " + fmt("%.2e", worst_s) + " (tol 1e-4)"};
}

Outcome slicing_identity() {
    std::mt19937_64 rng(77);
    const int cases = 60;
    double worst = 0;
    int bad = 0;
    int total_slices = 0;
    for (int k = 0; k < cases; ++k) {
        const int n = 4 + static_cast<int>(rng() % 7);
        const bh::Circuit c = bh::random_circuit(n, 3 + static_cast<int>(rng() % 6), rng());
        const int n2 = static_cast<int>(rng() % 3);
        const auto open = bh::testing::random_subset(rng, c.layout.ids, n2);
        const bh::TensorNetwork tn = bh::build_network(c, open, bh::testing::random_bits(rng, n - n2));
        bh::ContractionTree tree =
            (k % 2 == 0) ? random_tree(tn, rng) : bh::greedy_order(tn, [&] {
                std::vector<int> all(static_cast<std::size_t>(tn.node_count()));
                std::iota(all.begin(), all.end(), 0);
                return all;
            }());
        int sc = bh::complexity_of(tn, tree).sc;
        if (sc > 22) {
            tree = bh::greedy_order(tn, tree.leaves);
            sc = bh::complexity_of(tn, tree).sc;
        }
        bh::SliceOptions so;
        so.scope = bh::SliceScope::whole_tree;
        so.reconfigure = (k % 3 == 0);
        so.target_space = std::max(n2, sc - 1 - static_cast<int>(rng() % 3));
        bh::SliceResult sr;
        try {
            sr = bh::select_slices(tn, tree, so);
        } catch (const bh::Error &e) {
            if (e.code() != bh::Errc::cannot_reach_cap) throw;
            so.target_space = sc;
            sr = bh::select_slices(tn, tree, so);
        }
        total_slices += sr.plan.n_e();
        const double r = bh::sliced_equivalence_check(tn, sr.tree, sr.plan);
        worst = std::max(worst, r);
        if (!(r < 1e-10)) ++bad;
    }
    return {bad == 0, std::to_string(cases) + " networks, " + std::to_string(total_slices) +
                          " sliced indices total, worst residual " + fmt("%.2e", worst) + " (tol 1e-10)"};
}

Outcome normalization() {
    std::mt19937_64 rng(3);
    double worst = 0;
    int cases = 0;
    for (int n = 2; n <= 12; ++n) {
        const bh::Circuit c = bh::random_circuit(n, 4 + static_cast<int>(rng() % 8), rng());
        const bh::AmplitudeTable t = bh::testing::run_pipeline(c, c.layout.ids, "", {}, {});
        double s = 0;
        for (const auto &r : t.rows) s += r.probability;
        worst = std::max(worst, std::abs(s - 1));
        ++cases;
    }
    return {worst <= 1e-8, std::to_string(cases) + " fully open runs (n=2..12), worst |sum-1| " + fmt("%.2e", worst)};
}

Outcome complexity_accounting() {
    std::mt19937_64 rng(99);
    int trees = 0;
    int bad = 0;
    for (int k = 0; k < 40; ++k) {
        const int n = 3 + static_cast<int>(rng() % 10);
        const bh::Circuit c = bh::random_circuit(n, 2 + static_cast<int>(rng() % 8), rng());
        const int n2 = static_cast<int>(rng() % static_cast<std::uint64_t>(std::min(n, 5) + 1));
        const auto open = bh::testing::random_subset(rng, c.layout.ids, n2);
        const bh::TensorNetwork tn = bh::build_network(c, open, bh::testing::random_bits(rng, n - n2),
                                                       bh::BuildOptions{k % 4 != 0});
        std::vector<bh::ContractionTree> cands;
        cands.push_back(random_tree(tn, rng));
        bh::PartitionConstraints cons;
        cons.rng_seed = rng();
        cons.leaf_limit = 1 + static_cast<int>(rng() % 12);
        cands.push_back(bh::hierarchical_partition(tn, cons));
        cands.push_back(bh::branch_merge(tn, cands.back(), 0.25));
        for (const auto &tree : cands) {
            if (bh::complexity_of(tn, tree).sc > 22) continue;
            std::set<int> removed;
            std::map<int, int> pins;
            std::vector<int> bonds;
            for (const auto &[i, e] : tn.index_endpoints) {
                if (e.size() == 2) bonds.push_back(i);
            }
            for (int s = 0; s < 2 && !bonds.empty(); ++s) {
                const int i = bonds[rng() % bonds.size()];
                removed.insert(i);
                pins[i] = static_cast<int>(rng() & 1U);
            }
            std::uint64_t mults = 0;
            bh::contract_tree<double>(tn, tree, pins, std::nullopt, &mults);
            const bh::Complexity cx = bh::complexity_of(tn, tree, removed);
            ++trees;
            if (cx.tc_overflow || mults != cx.tc_exact) ++bad;
        }
    }
    return {bad == 0, std::to_string(trees) + " trees (random, partitioned, branch-merged; with pinned bonds), " +
                          std::to_string(bad) + " count mismatches"};
}

Outcome xeb_identities() {
    bool ok = true;
    std::string detail;
    for (int n : {1, 5, 12, 20}) {
        const std::vector<double> uniform(100, std::ldexp(1.0, -n));
        const double fu = bh::xeb(uniform, n).f_xeb;
        const double fp = bh::xeb({1.0}, n).f_xeb;
        ok = ok && fu == 0.0 && fp == std::ldexp(1.0, n) - 1;
    }
    // Porter-Thomas probabilities over 2^n bitstrings, then 1e5 bitstrings
    // sampled from that distribution.
    std::mt19937_64 rng(123);
    std::exponential_distribution<double> ex(1.0);
    const int n = 20;
    std::vector<double> dist(std::size_t{1} << n);
    double total = 0;
    for (auto &p : dist) total += (p = ex(rng));
    for (auto &p : dist) p /= total;
    std::discrete_distribution<std::size_t> pick(dist.begin(), dist.end());
    std::vector<double> probs(100000);
    for (auto &p : probs) p = dist[pick(rng)];
    const double f = bh::xeb(probs, n).f_xeb;
    ok = ok && std::abs(f - 1) <= 0.05;
    detail = "uniform -> 0 and point mass -> 2^n-1 exact; Porter-Thomas 1e5 samples F=" + fmt("%.4f", f) +
             " (1 +/- 0.05)";
    return {ok, detail};
}

Outcome porter_thomas(const std::vector<bh::AmplitudeTable> &tables) {
    bh::RandomCircuitOptions opts;
    opts.sycamore_angles = true;
    const bh::Circuit c = bh::random_circuit(16, 16, 2026, opts);
    const bh::StateVector sv = bh::simulate(c);
    std::vector<double> probs;
    probs.reserve(sv.data.size());
    for (const auto &a : sv.data) probs.push_back(std::norm(a));
    const double ks = bh::ks_distance_porter_thomas(probs, 16);
    double worst = 0;
    for (const auto &t : tables) worst = std::max(worst, std::abs(bh::marginal_and_conditional(t).conditional_xeb));
    return {ks < 0.02 && worst <= 1e-10 && !tables.empty(),
            "n=16 m=16 (hardware-like FSIM angles) KS " + fmt("%.4f", ks) + " (< 0.02); conditional XEB worst |F| " + fmt("%.1e", worst) +
                " over " + std::to_string(tables.size()) + " tables (<= 1e-10)"};
}

Outcome big_head(std::uint64_t trees, std::uint64_t cut_violations, std::uint64_t reuse_violations) {
    // Dedicated reuse check: many amplitudes, one head contraction per slice.
    const bh::Circuit c = bh::random_circuit(14, 12, 8);
    std::vector<int> open{0, 1, 2, 3, 4, 5};
    bh::EngineStats stats;
    bh::ContractionPlan plan;
    const auto t = bh::testing::run_pipeline(c, open, "01011011", {}, {}, 4, &stats, &plan);
    const bool reuse = stats.head_contractions == plan.slices.subtask_count() && t.rows.size() == 64;
    return {cut_violations == 0 && reuse_violations == 0 && reuse,
            std::to_string(trees) + " orders checked, " + std::to_string(cut_violations) +
                " first-cut violations; 64 amplitudes used " + std::to_string(stats.head_contractions.load()) +
                " head contractions for " + std::to_string(plan.slices.subtask_count()) + " slices"};
}

Outcome mixing() {
    const int n = 12;
    const bh::Circuit c = bh::random_circuit(n, 12, 4242);
    const bh::StateVector sv = bh::simulate(c);
    std::vector<double> p;
    for (const auto &a : sv.data) p.push_back(std::norm(a));
    std::vector<double> sorted = p;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const std::size_t K = 22;
    const std::size_t R = 978;
    std::vector<double> known(sorted.begin(), sorted.begin() + K);
    const double formula = bh::mixed_xeb(known, n, R);
    std::mt19937_64 rng(555);
    const int trials = 4000;
    double sum = 0, sum2 = 0;
    const double known_sum = std::accumulate(known.begin(), known.end(), 0.0);
    for (int t = 0; t < trials; ++t) {
        double s = known_sum;
        for (std::size_t r = 0; r < R; ++r) s += p[rng() % p.size()];
        const double f = std::ldexp(s, n) / static_cast<double>(K + R) - 1;
        sum += f;
        sum2 += f * f;
    }
    const double mean = sum / trials;
    const double se = std::sqrt((sum2 / trials - mean * mean) / trials);
    const double z = std::abs(mean - formula) / se;
    return {z < 3, "formula " + fmt("%.5f", formula) + ", Monte Carlo " + fmt("%.5f", mean) + " +/- " +
                       fmt("%.5f", se) + " (" + fmt("%.2f", z) + " SE)"};
}

Outcome determinism() {
    const bh::Circuit c = bh::random_circuit(12, 10, 31337);
    const std::vector<int> open{2, 5, 9};
    const bh::TensorNetwork tn = bh::build_network(c, open, "101100101");
    const bh::ContractionPlan plan = bh::testing::plan_with_drop(c, tn, {}, 4);
    const std::uint64_t total = plan.slices.subtask_count();
    if (total < 4) return {false, "plan has fewer than 4 slices"};
    bh::RunOptions ro;
    const bh::HeadVector full = bh::compute_head_vector(tn, plan, ro);
    std::ostringstream full_tsv;
    bh::write_table_tsv(full_tsv, bh::compute_tail_amplitudes(tn, plan, full, ro));
    std::mt19937_64 rng(9);
    int splits = 0;
    int bad = 0;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::uint64_t> cuts{0, total};
        const int pieces = 1 + static_cast<int>(rng() % 5);
        for (int k = 0; k < pieces; ++k) cuts.push_back(1 + rng() % (total - 1));
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        std::vector<bh::HeadVector> parts;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            ro.threads = 1 + static_cast<int>(rng() % 3);
            std::stringstream bin;
            bh::write_partial(bin, bh::compute_head_vector(tn, plan, ro, std::make_pair(cuts[k], cuts[k + 1])));
            parts.push_back(bh::read_partial(bin));
        }
        std::shuffle(parts.begin(), parts.end(), rng);
        const bh::HeadVector red = bh::reduce_partials(parts);
        std::ostringstream tsv;
        bh::write_table_tsv(tsv, bh::compute_tail_amplitudes(tn, plan, red, ro));
        const bool same_bits = red.data().size() == full.data().size() &&
                               std::memcmp(red.data().data(), full.data().data(),
                                           full.data().size() * sizeof(cplx)) == 0;
        if (!same_bits || tsv.str() != full_tsv.str()) ++bad;
        ++splits;
    }
    return {bad == 0, std::to_string(splits) + " random range splits of " + std::to_string(total) +
                          " slices, shuffled reduce: " + std::to_string(bad) + " differ from single-shot"};
}

// Drives the command-line tool the way a user would: generate, info, order.
Outcome full_scale() {
    const std::filesystem::path dir = std::filesystem::temp_directory_path() / "bighead_acceptance";
    std::filesystem::create_directories(dir);
    const std::string circuit = (dir / "circuit_n53_m20_s0_pABCDCDAB.txt").string();
    const std::string order = (dir / "order.json").string();
    auto cli = [](std::vector<std::string> args, std::string *captured) {
        std::vector<const char *> argv{"bighead"};
        for (const auto &a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = bh::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        if (code != 0) throw std::runtime_error("bighead " + args.front() + " exited " + std::to_string(code) + ": " + err.str());
        if (captured) *captured = out.str();
    };
    cli({"generate", "sycamore", "--cycles", "20", "--seed", "0", "-o", circuit}, nullptr);
    std::string info_text;
    cli({"info", circuit, "--json"}, &info_text);
    const auto info = nlohmann::json::parse(info_text);
    cli({"order", circuit, "--open", "auto", "--n-open", "21", "--seed", "1", "--target-space", "30", "--reconfigure",
         "-o", order},
        nullptr);
    std::ifstream in(order);
    const auto plan = nlohmann::json::parse(in);
    const auto &ann = plan.at("annotations");
    const auto &sub = plan.at("subtask");
    const int n_e = sub.at("n_e").get<int>();
    const double t_sub = sub.at("complexity").at("tc").get<double>();
    const int sc_sub = sub.at("complexity").at("sc").get<int>();
    const double t_head = t_sub * std::ldexp(1.0, n_e);
    std::printf("       fused tensors      %d (reference 381)\n", info.at("fused_tensors").get<int>());
    std::printf("       head/tail nodes    %d/%d (reference 345/36), n_c %d\n", ann.at("n_head").get<int>(),
                ann.at("n_tail").get<int>(), ann.at("n_c").get<int>());
    std::printf("       unsliced head      tc %.3e, sc 2^%d\n", ann.at("head").at("tc").get<double>(),
                ann.at("head").at("sc").get<int>());
    std::printf("       subtasks           2^%d (reference 2^23)\n", n_e);
    std::printf("       T_sub              %.3e (reference 5.37e11), sc 2^%d\n", t_sub, sc_sub);
    std::printf("       T_head             %.3e (reference 4.51e18), flops %.3e (reference 3.61e19)\n", t_head,
                8 * t_head);
    return {sc_sub <= 30, "n=53 m=20 plan with per-subtask sc 2^" + std::to_string(sc_sub) +
                              " (cap 2^30); figures above are reported, not compared"};
}

}  // namespace

int main() {
    std::uint64_t trees = 0, cut_violations = 0, reuse_violations = 0;
    report(1, "oracle equivalence", [&] { return oracle_equivalence(&trees, &cut_violations, &reuse_violations); });
    report(2, "slicing identity", slicing_identity);
    report(3, "normalization", normalization);
    report(4, "complexity accounting", complexity_accounting);
    report(5, "xeb identities", xeb_identities);
    std::vector<bh::AmplitudeTable> tables;
    {
        std::mt19937_64 rng(44);
        for (int k = 0; k < 12; ++k) {
            const int n = 4 + static_cast<int>(rng() % 9);
            const bh::Circuit c = bh::random_circuit(n, 6, rng());
            const int n2 = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n));
            const auto open = bh::testing::random_subset(rng, c.layout.ids, n2);
            tables.push_back(bh::testing::run_pipeline(c, open, bh::testing::random_bits(rng, n - n2), {}, {}));
        }
    }
    report(6, "porter-thomas emergence", [&] { return porter_thomas(tables); });
    report(7, "big-head structure", [&] { return big_head(trees, cut_violations, reuse_violations); });
    report(8, "mixing formula", mixing);
    report(9, "determinism and distribution", determinism);
    report(10, "full-scale planning", full_scale);
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
