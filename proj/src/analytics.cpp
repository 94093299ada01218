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

#include "bighead/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "bighead/errors.hpp"

namespace bighead {

XebReport xeb(const std::vector<double> &probs, int n) {
    if (probs.empty()) {
        throw Error(Errc::empty_input, "xeb needs at least one probability");
    }
    XebReport r;
    r.L = probs.size();
    r.n = n;
    double sum = 0.0;
    r.p_min = probs.front();
    r.p_max = probs.front();
    for (double p : probs) {
        sum += p;
        r.p_min = std::min(r.p_min, p);
        r.p_max = std::max(r.p_max, p);
    }
    r.f_xeb = std::ldexp(sum, n) / static_cast<double>(r.L) - 1.0;
    return r;
}

nlohmann::json xeb_to_json(const XebReport &r) {
    return {{"L", r.L}, {"n", r.n}, {"f_xeb", r.f_xeb}, {"p_min", r.p_min}, {"p_max", r.p_max}, {"notes", r.notes}};
}

double porter_thomas_density(double p, int n) {
    const double N = std::ldexp(1.0, n);
    return N * std::exp(-p * N);
}

std::vector<HistBin> histogram(const std::vector<double> &probs, int n, int bins, HistScale scale) {
    if (probs.empty()) {
        throw Error(Errc::empty_input, "histogram needs at least one probability");
    }
    if (bins < 1) {
        throw Error(Errc::config_mismatch, "histogram needs at least one bin");
    }
    std::vector<double> x;
    x.reserve(probs.size());
    for (double p : probs) x.push_back(std::ldexp(p, n));
    const double xmax = *std::max_element(x.begin(), x.end());
    std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
    if (scale == HistScale::linear_Np) {
        const double top = xmax > 0 ? xmax : 1.0;
        for (int k = 0; k <= bins; ++k) edges[static_cast<std::size_t>(k)] = top * k / bins;
    } else {
        double xmin = xmax;
        for (double v : x) {
            if (v > 0) xmin = std::min(xmin, v);
        }
        double lo = xmin > 0 ? xmin : 1.0;
        double hi = xmax > 0 ? xmax : 1.0;
        if (hi <= lo) {
            lo /= 2;
            hi *= 2;
        }
        const double ratio = std::log(hi / lo);
        for (int k = 0; k <= bins; ++k) edges[static_cast<std::size_t>(k)] = lo * std::exp(ratio * k / bins);
        edges.back() = hi;
    }
    std::vector<HistBin> out(static_cast<std::size_t>(bins));
    for (int k = 0; k < bins; ++k) {
        out[static_cast<std::size_t>(k)].lo = edges[static_cast<std::size_t>(k)];
        out[static_cast<std::size_t>(k)].hi = edges[static_cast<std::size_t>(k) + 1];
    }
    for (double v : x) {
        auto it = std::upper_bound(edges.begin(), edges.end(), v);
        long k = static_cast<long>(it - edges.begin()) - 1;
        k = std::clamp(k, 0L, static_cast<long>(bins) - 1);
        out[static_cast<std::size_t>(k)].count += 1;
    }
    const double L = static_cast<double>(x.size());
    for (auto &b : out) {
        const double w = b.hi - b.lo;
        b.density = w > 0 ? static_cast<double>(b.count) / (L * w) : 0.0;
        b.pt_density = w > 0 ? (std::exp(-b.lo) - std::exp(-b.hi)) / w : std::exp(-b.lo);
    }
    return out;
}

double ks_distance_porter_thomas(const std::vector<double> &probs, int n) {
    if (probs.empty()) {
        throw Error(Errc::empty_input, "KS distance needs at least one probability");
    }
    std::vector<double> x;
    x.reserve(probs.size());
    for (double p : probs) x.push_back(std::ldexp(p, n));
    std::sort(x.begin(), x.end());
    const double L = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = -std::expm1(-x[i]);
        d = std::max({d, static_cast<double>(i + 1) / L - f, f - static_cast<double>(i) / L});
    }
    return d;
}

std::vector<CurvePoint> postselect_curve(const std::vector<double> &probs_desc, int n, int points) {
    if (probs_desc.empty()) {
        throw Error(Errc::empty_input, "post-selection curve needs at least one probability");
    }
    for (std::size_t i = 1; i < probs_desc.size(); ++i) {
        if (probs_desc[i] > probs_desc[i - 1]) {
            throw Error(Errc::not_sorted, "probabilities must be sorted in descending order (index " +
                                              std::to_string(i) + ")");
        }
    }
    const std::size_t L = probs_desc.size();
    std::vector<double> prefix(L + 1, 0.0);
    for (std::size_t i = 0; i < L; ++i) prefix[i + 1] = prefix[i] + probs_desc[i];
    auto point = [&](std::size_t k) {
        return CurvePoint{static_cast<double>(k) / static_cast<double>(L), k,
                          std::ldexp(prefix[k], n) / static_cast<double>(k) - 1.0};
    };
    std::vector<CurvePoint> out{point(1)};
    const int m = std::max(points, 1);
    for (int j = 1; j <= m; ++j) {
        std::size_t k = static_cast<std::size_t>(std::llround(static_cast<double>(L) * j / m));
        k = std::clamp<std::size_t>(k, 1, L);
        if (k > out.back().kept) out.push_back(point(k));
    }
    return out;
}

double mixed_xeb(const std::vector<double> &known, int n, std::size_t num_random) {
    if (known.empty()) {
        if (num_random == 0) {
            throw Error(Errc::empty_input, "mixed_xeb needs known or random bitstrings");
        }
        return 0.0;
    }
    const double K = static_cast<double>(known.size());
    return K * xeb(known, n).f_xeb / (K + static_cast<double>(num_random));
}

ConditionalReport marginal_and_conditional(const AmplitudeTable &table) {
    const int n2 = table.n2();
    const std::size_t expected = std::size_t{1} << n2;
    std::set<std::string> seen;
    for (const auto &r : table.rows) {
        if (static_cast<int>(r.s2.size()) != n2) {
            throw Error(Errc::incomplete_enumeration, "row " + r.bitstring + " has no s2 of length n2");
        }
        seen.insert(r.s2);
    }
    if (table.rows.size() != expected || seen.size() != expected) {
        throw Error(Errc::incomplete_enumeration, "table has " + std::to_string(seen.size()) + " distinct s2 of " +
                                                      std::to_string(expected));
    }
    ConditionalReport rep;
    rep.n2 = n2;
    for (const auto &r : table.rows) rep.marginal += r.probability;
    if (!(rep.marginal > 0)) {
        throw Error(Errc::zero_marginal, "P(s1) is zero; conditional distribution undefined");
    }
    rep.conditional.reserve(table.rows.size());
    for (const auto &r : table.rows) rep.conditional.push_back(r.probability / rep.marginal);
    rep.conditional_xeb = xeb(rep.conditional, n2).f_xeb;
    return rep;
}

}  // namespace bighead
