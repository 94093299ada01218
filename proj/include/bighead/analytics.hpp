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

#include <cstddef>
#include <string>
#include <vector>

#include "bighead/table.hpp"
#include "json.hpp"

namespace bighead {

struct XebReport {
    std::size_t L = 0;
    int n = 0;
    double f_xeb = 0.0;
    double p_min = 0.0;
    double p_max = 0.0;
    std::string notes;
};

/// Linear cross-entropy fidelity (2^n / L) * sum(p) - 1.
XebReport xeb(const std::vector<double> &probs, int n);
nlohmann::json xeb_to_json(const XebReport &r);

/// 2^n exp(-p 2^n).
double porter_thomas_density(double p, int n);

enum class HistScale { linear_Np, log };

struct HistBin {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
    /// Normalized density over x = 2^n p.
    double density = 0.0;
    /// Mean of the exponential density exp(-x) over the bin.
    double pt_density = 0.0;
};

/// Bins over x = 2^n p; `log` spaces bin edges geometrically.
std::vector<HistBin> histogram(const std::vector<double> &probs, int n, int bins, HistScale scale);

/// Kolmogorov-Smirnov distance between the samples x = 2^n p and the CDF 1 - exp(-x).
double ks_distance_porter_thomas(const std::vector<double> &probs, int n);

struct CurvePoint {
    double fraction = 0.0;
    std::size_t kept = 0;
    double f_xeb = 0.0;
};

/// XEB of the top-k prefix of descending probabilities: k = 1, then `points`
/// evenly spaced fractions up to 1.
std::vector<CurvePoint> postselect_curve(const std::vector<double> &probs_desc, int n, int points = 100);

/// Expected XEB after mixing `known` with `num_random` uniformly random bitstrings.
double mixed_xeb(const std::vector<double> &known, int n, std::size_t num_random);

struct ConditionalReport {
    double marginal = 0.0;
    std::vector<double> conditional;
    double conditional_xeb = 0.0;
    int n2 = 0;
};

/// P(s1), the conditional distribution over s2 and its XEB with n replaced by n2.
ConditionalReport marginal_and_conditional(const AmplitudeTable &table);

}  // namespace bighead
