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

#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bighead/circuit.hpp"
#include "bighead/engine.hpp"
#include "bighead/errors.hpp"
#include "bighead/generators.hpp"
#include "bighead/network.hpp"
#include "bighead/plan.hpp"
#include "bighead/refsim.hpp"

namespace bighead::testing {

// Independent dense contractor: folds tensors one by one into an accumulator
// using explicit per-entry index decoding. Slow, but shares no code with the
// engine's permute/contract_pair path.
struct NaiveTensor {
    std::vector<int> idx;
    std::vector<cplx> v;
};

inline NaiveTensor naive_product(const NaiveTensor &a, const NaiveTensor &b) {
    std::vector<int> out_idx;
    std::vector<int> shared;
    for (int i : a.idx) {
        bool in_b = false;
        for (int j : b.idx) in_b = in_b || i == j;
        (in_b ? shared : out_idx).push_back(i);
    }
    for (int j : b.idx) {
        bool in_a = false;
        for (int i : a.idx) in_a = in_a || i == j;
        if (!in_a) out_idx.push_back(j);
    }
    std::vector<int> all = out_idx;
    all.insert(all.end(), shared.begin(), shared.end());
    NaiveTensor out{out_idx, std::vector<cplx>(std::size_t{1} << out_idx.size())};
    auto offset = [](const std::vector<int> &idx, const std::map<int, int> &val) {
        std::size_t off = 0;
        for (int i : idx) off = (off << 1) | static_cast<std::size_t>(val.at(i));
        return off;
    };
    for (std::size_t e = 0; e < (std::size_t{1} << all.size()); ++e) {
        std::map<int, int> val;
        for (std::size_t k = 0; k < all.size(); ++k) {
            val[all[k]] = static_cast<int>((e >> (all.size() - 1 - k)) & 1U);
        }
        out.v[offset(out_idx, val)] += a.v[offset(a.idx, val)] * b.v[offset(b.idx, val)];
    }
    return out;
}

/// Full contraction in node order; open indices end up in the result in
/// ascending qubit order.
inline std::vector<cplx> naive_contract(const TensorNetwork &tn) {
    NaiveTensor acc{{}, {cplx(1.0)}};
    for (const auto &n : tn.nodes) acc = naive_product(acc, NaiveTensor{n.indices, n.data});
    std::vector<int> order;
    for (auto [q, i] : tn.open_output_indices) order.push_back(i);
    NaiveTensor perm{order, std::vector<cplx>(acc.v.size())};
    for (std::size_t e = 0; e < acc.v.size(); ++e) {
        std::map<int, int> val;
        for (std::size_t k = 0; k < order.size(); ++k) {
            val[order[k]] = static_cast<int>((e >> (order.size() - 1 - k)) & 1U);
        }
        std::size_t off = 0;
        for (int i : acc.idx) off = (off << 1) | static_cast<std::size_t>(val.at(i));
        perm.v[e] = acc.v[off];
    }
    return perm.v;
}

/// Error code thrown by `f`, or nothing if it returns normally.
template <typename F>
std::optional<Errc> error_of(F &&f) {
    try {
        f();
    } catch (const Error &e) {
        return e.code();
    }
    return std::nullopt;
}

inline double rel_err(cplx a, cplx b, double floor) {
    return std::abs(a - b) / std::max(std::abs(b), floor);
}

inline std::string random_bits(std::mt19937_64 &rng, int n) {
    std::string s;
    for (int k = 0; k < n; ++k) s.push_back(static_cast<char>('0' + (rng() & 1U)));
    return s;
}

inline std::vector<int> random_subset(std::mt19937_64 &rng, const std::vector<int> &ids, int k) {
    std::vector<int> pool = ids;
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(static_cast<std::size_t>(k));
    std::sort(pool.begin(), pool.end());
    return pool;
}

/// Plans with the head cap set `drop` below the unsliced head size (never
/// below the cut width), so small networks still get sliced.
inline ContractionPlan plan_with_drop(const Circuit &c, const TensorNetwork &tn, PlanOptions popts, int drop) {
    popts.slicing.target_space = 1000;
    ContractionPlan plan = make_plan(c, tn, popts);
    if (drop <= 0 || !plan.tree.head_root) return plan;
    const int head_sc = complexity_of(tn, plan.tree, {}, plan.tree.head_root).sc;
    SliceOptions so = popts.slicing;
    so.target_space = std::max(cut_size(tn, plan.tree), head_sc - drop);
    SliceResult sr = select_slices(tn, plan.tree, so);
    plan.tree = std::move(sr.tree);
    plan.slices = std::move(sr.plan);
    return plan;
}

/// Builds, plans and runs a circuit; returns the amplitude table.
inline AmplitudeTable run_pipeline(const Circuit &c, const std::vector<int> &open, const std::string &s1,
                                   const PlanOptions &popts, const RunOptions &ropts, int drop = 2,
                                   EngineStats *stats = nullptr, ContractionPlan *plan_out = nullptr) {
    const TensorNetwork tn = build_network(c, open, s1);
    const ContractionPlan plan = plan_with_drop(c, tn, popts, drop);
    check_plan(tn, plan);
    const HeadVector hv = compute_head_vector(tn, plan, ropts, std::nullopt, stats);
    if (plan_out != nullptr) *plan_out = plan;
    return compute_tail_amplitudes(tn, plan, hv, ropts, stats);
}

}  // namespace bighead::testing
