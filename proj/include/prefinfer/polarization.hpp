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

// Polarization metrics: standardized difference of means from an
// equal-weight shared-variance two-Normal fit, standard deviation, and
// excess kurtosis (negative values indicate two separated modes).

#include <cstdint>
#include <span>
#include <vector>

#include "prefinfer/aggregate.hpp"
#include "prefinfer/rng.hpp"

namespace prefinfer {

double mixture_mean(const AggregateDistribution& dist);
/// Throws Error(NegativeRadicand) when the variance is below -1e-12.
double mixture_sd(const AggregateDistribution& dist);
/// E[(X - mean)^z] for z in 2..4 by binomial expansion over components.
double mixture_central_moment(const AggregateDistribution& dist, int z);
/// Fourth central moment over squared variance, minus 3. Throws Error(ZeroVariance).
double mixture_excess_kurtosis(const AggregateDistribution& dist);

std::vector<double> sample_mixture(const AggregateDistribution& dist, std::size_t n, Rng& rng);

struct TwoNormalFit {
    double mu1 = 0.0;  // mu1 <= mu2
    double mu2 = 0.0;
    double sigma = 1.0;
    int iterations = 0;
    bool converged = false;
};

inline constexpr double kSigmaFloor = 1e-6;

/// EM with weights pinned at 0.5 and one shared sigma, started at
/// mean -/+ sd. The tolerance applies to parameter changes measured in units
/// of the sample standard deviation. Throws Error(TooFewPoints) below 4 values.
TwoNormalFit fit_two_normal(std::span<const double> sample, double tol = 1e-8, int max_iter = 1000);

/// |mu2 - mu1| / sigma of the two-Normal fit.
double difference_of_means(std::span<const double> sample);

struct MetricTriple {
    double diff_of_means = 0.0;
    double std_dev = 0.0;
    double excess_kurtosis = 0.0;
};

struct PolarizationReport {
    MetricTriple voters;
    MetricTriple candidates;
    MetricTriple difference;  // voters - candidates
};

/// SD with denominator n and excess kurtosis m4 / m2^2 - 3 of a score list.
MetricTriple sample_metrics(std::span<const double> scores);

inline constexpr std::size_t kVoterDraws = 100000;

/// Voter metrics use the closed forms plus difference_of_means on
/// kVoterDraws draws seeded by `seed`. Needs at least 4 candidate scores.
PolarizationReport polarization_report(const AggregateDistribution& voters, std::span<const double> candidate_scores,
                                       std::uint64_t seed);

}  // namespace prefinfer
