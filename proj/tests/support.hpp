// Copyright 2026 The prefinfer Authors
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

// Independent reference computations shared by the tests. None of these call
// into the library's closed forms.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace prefinfer::testing {

inline double normal_cdf_oracle(double x, double mu, double sigma) {
    return 0.5 * (1.0 + std::erf((x - mu) / (sigma * std::numbers::sqrt2)));
}

/// Adaptive Gauss-Kronrod integral of f over [lo, hi], split at the given
/// interior break points so kinks and jumps sit on panel edges.
inline double integrate(const std::function<double(double)>& f, double lo, double hi,
                        std::vector<double> breaks = {}) {
    if (!(hi > lo)) return 0.0;
    breaks.push_back(lo);
    breaks.push_back(hi);
    std::sort(breaks.begin(), breaks.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = std::max(lo, breaks[i]);
        const double b = std::min(hi, breaks[i + 1]);
        if (b > a) {
            total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
        }
    }
    return total;
}

/// sup |F_n - F| for a sample against a reference CDF.
inline double ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, std::abs(static_cast<double>(i + 1) / n - f), std::abs(f - static_cast<double>(i) / n)});
    }
    return d;
}

/// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
    }
    return d;
}

inline double sample_mean(const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

inline double sample_central(const std::vector<double>& xs, int z) {
    const double m = sample_mean(xs);
    double s = 0.0;
    for (double x : xs) s += std::pow(x - m, z);
    return s / static_cast<double>(xs.size());
}

/// Statistic on the whole sample plus a batch-means standard error.
struct Estimate {
    double value = 0.0;
    double se = 0.0;
};

inline Estimate batch_estimate(const std::vector<double>& xs, int batches,
                               const std::function<double(const std::vector<double>&)>& stat) {
    const std::size_t per = xs.size() / static_cast<std::size_t>(batches);
    std::vector<double> values;
    for (int b = 0; b < batches; ++b) {
        std::vector<double> chunk(xs.begin() + static_cast<std::ptrdiff_t>(b * per),
                                  xs.begin() + static_cast<std::ptrdiff_t>((b + 1) * per));
        values.push_back(stat(chunk));
    }
    const double m = sample_mean(values);
    double v = 0.0;
    for (double x : values) v += (x - m) * (x - m);
    v /= static_cast<double>(batches - 1);
    return {stat(xs), std::sqrt(v / static_cast<double>(batches))};
}

inline double binomial_coefficient(int n, int k) {
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

}  // namespace prefinfer::testing
