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
#include "prefinfer/polarization.hpp"

#include <algorithm>
#include <cmath>

#include "prefinfer/error.hpp"

namespace prefinfer {

namespace {

double binomial(int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

}  // namespace

double mixture_mean(const AggregateDistribution& dist) {
    double m = 0.0;
    for (const auto& wc : dist.components) m += wc.weight * mean(wc.params);
    return m;
}

double mixture_sd(const AggregateDistribution& dist) {
    const double m = mixture_mean(dist);
    double second = 0.0;
    for (const auto& wc : dist.components) {
        const double mk = mean(wc.params);
        second += wc.weight * (mk * mk + central_moment(wc.params, 2));
    }
    double var = second - m * m;
    if (var < 0.0) {
        if (var < -1e-12) {
            throw Error(ErrorCode::NegativeRadicand, "mixture variance is negative (" + format_double(var) + ")");
        }
        var = 0.0;
    }
    return std::sqrt(var);
}

double mixture_central_moment(const AggregateDistribution& dist, int z) {
    if (z < 2 || z > 4) {
        throw Error(ErrorCode::UnsupportedMoment, "mixture central moments are available for z in 2..4");
    }
    const double m = mixture_mean(dist);
    double total = 0.0;
    for (const auto& wc : dist.components) {
        const double delta = mean(wc.params) - m;
        double inner = 0.0;
        for (int j = 0; j <= z; ++j) {
            inner += binomial(z, j) * central_moment(wc.params, j) * std::pow(delta, z - j);
        }
        total += wc.weight * inner;
    }
    return total;
}

double mixture_excess_kurtosis(const AggregateDistribution& dist) {
    const double sd = mixture_sd(dist);
    if (!(sd > 0.0)) throw Error(ErrorCode::ZeroVariance, "kurtosis of a distribution with zero variance");
    const double var = sd * sd;
    return mixture_central_moment(dist, 4) / (var * var) - 3.0;
}

std::vector<double> sample_mixture(const AggregateDistribution& dist, std::size_t n, Rng& rng) {
    std::vector<double> cumulative;
    double acc = 0.0;
    for (const auto& wc : dist.components) cumulative.push_back(acc += wc.weight);
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform() * acc;
        std::size_t c = 0;
        while (c + 1 < cumulative.size() && u >= cumulative[c]) ++c;
        out.push_back(sample(dist.components[c].params, rng));
    }
    return out;
}

TwoNormalFit fit_two_normal(std::span<const double> sample, double tol, int max_iter) {
    if (sample.size() < 4) {
        throw Error(ErrorCode::TooFewPoints, "two-Normal fit needs at least 4 values, got " +
                                                 std::to_string(sample.size()));
    }
    const double n = static_cast<double>(sample.size());
    double m = 0.0;
    for (double x : sample) {
        if (!std::isfinite(x)) throw Error(ErrorCode::TooFewPoints, "two-Normal fit needs finite values");
        m += x;
    }
    m /= n;
    double ss = 0.0;
    for (double x : sample) ss += (x - m) * (x - m);
    const double sd = std::sqrt(ss / n);
    const double unit = sd > 0.0 ? sd : 1.0;

    TwoNormalFit f;
    f.mu1 = m - sd;
    f.mu2 = m + sd;
    f.sigma = std::max(sd, kSigmaFloor);
    for (f.iterations = 0; f.iterations < max_iter;) {
        ++f.iterations;
        // Equal weights and shared sigma: the responsibility of component 1 is a logistic.
        const double inv2s2 = 1.0 / (2.0 * f.sigma * f.sigma);
        double r_sum = 0.0, r_x = 0.0, q_x = 0.0;
        for (double x : sample) {
            const double d1 = x - f.mu1;
            const double d2 = x - f.mu2;
            const double r = 1.0 / (1.0 + std::exp((d1 * d1 - d2 * d2) * inv2s2));
            r_sum += r;
            r_x += r * x;
            q_x += (1.0 - r) * x;
        }
        const double mu1 = r_sum > 0.0 ? r_x / r_sum : f.mu1;
        const double mu2 = n - r_sum > 0.0 ? q_x / (n - r_sum) : f.mu2;
        double pooled = 0.0;
        for (double x : sample) {
            const double d1 = x - f.mu1;
            const double d2 = x - f.mu2;
            const double r = 1.0 / (1.0 + std::exp((d1 * d1 - d2 * d2) * inv2s2));
            pooled += r * (x - mu1) * (x - mu1) + (1.0 - r) * (x - mu2) * (x - mu2);
        }
        const double sigma = std::max(std::sqrt(pooled / n), kSigmaFloor);
        const double change =
            std::max({std::abs(mu1 - f.mu1), std::abs(mu2 - f.mu2), std::abs(sigma - f.sigma)}) / unit;
        f.mu1 = mu1;
        f.mu2 = mu2;
        f.sigma = sigma;
        if (change < tol) {
            f.converged = true;
            break;
        }
    }
    if (f.mu1 > f.mu2) std::swap(f.mu1, f.mu2);
    return f;
}

double difference_of_means(std::span<const double> sample) {
    const auto f = fit_two_normal(sample);
    return std::abs(f.mu2 - f.mu1) / f.sigma;
}

MetricTriple sample_metrics(std::span<const double> scores) {
    if (scores.empty()) throw Error(ErrorCode::TooFewPoints, "no scores");
    const double n = static_cast<double>(scores.size());
    double m = 0.0;
    for (double x : scores) m += x;
    m /= n;
    double m2 = 0.0, m4 = 0.0;
    for (double x : scores) {
        const double d2 = (x - m) * (x - m);
        m2 += d2;
        m4 += d2 * d2;
    }
    m2 /= n;
    m4 /= n;
    if (!(m2 > 0.0)) throw Error(ErrorCode::ZeroVariance, "score list has zero variance");
    MetricTriple t;
    t.diff_of_means = difference_of_means(scores);
    t.std_dev = std::sqrt(m2);
    t.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    return t;
}

PolarizationReport polarization_report(const AggregateDistribution& voters, std::span<const double> candidate_scores,
                                       std::uint64_t seed) {
    if (candidate_scores.size() < 4) {
        throw Error(ErrorCode::TooFewPoints, "polarization needs at least 4 candidate scores");
    }
    PolarizationReport report;
    Rng rng(derive_seed(seed, "polarization-draws"));
    const auto draws = sample_mixture(voters, kVoterDraws, rng);
    report.voters.diff_of_means = difference_of_means(draws);
    report.voters.std_dev = mixture_sd(voters);
    report.voters.excess_kurtosis = mixture_excess_kurtosis(voters);
    report.candidates = sample_metrics(candidate_scores);
    report.difference = {report.voters.diff_of_means - report.candidates.diff_of_means,
                         report.voters.std_dev - report.candidates.std_dev,
                         report.voters.excess_kurtosis - report.candidates.excess_kurtosis};
    return report;
}

}  // namespace prefinfer
