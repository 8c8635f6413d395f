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

// District and state summaries of a fitted model. A precinct's "population"
// is its ballot count n0 + n1.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "prefinfer/components.hpp"
#include "prefinfer/ingest.hpp"
#include "prefinfer/sampler.hpp"

namespace prefinfer {

enum class ScopeKind { District, State };

struct Scope {
    ScopeKind kind = ScopeKind::State;
    int district = 0;  // used when kind == District

    static Scope state() { return {ScopeKind::State, 0}; }
    static Scope of_district(int d) { return {ScopeKind::District, d}; }
};

struct WeightedComponent {
    double weight = 0.0;
    ComponentParams params;
};

struct AggregateDistribution {
    std::vector<WeightedComponent> components;
    ScopeKind scope = ScopeKind::State;
    std::int64_t population = 0;
};

struct CycleRange {
    int first = 0;
    int last = 0;
};

struct DistrictEstimate {
    int district = 0;
    CycleRange cycles;
    double mean = 0.0;
    std::int64_t population = 0;
};

/// Population-weighted mean of the assigned cluster means. Throws Error(EmptyDistrict).
DistrictEstimate district_mean(const FitResult& fit, std::span<const ElectionRecord> elections, int district);

/// Estimates for every linked district present in `elections`, ascending.
std::vector<DistrictEstimate> district_means(const FitResult& fit, std::span<const ElectionRecord> elections);

/// Population-weighted mean across cycles of one district.
DistrictEstimate decade_mean(std::span<const DistrictEstimate> per_cycle);

/// Mixture of fitted components weighted by the ballots assigned to each in scope;
/// empty clusters are dropped. Throws Error(EmptyScope).
AggregateDistribution scope_distribution(const FitResult& fit, std::span<const ElectionRecord> elections,
                                         Scope scope);

double signed_log_transform(double x);

struct Correlation {
    double r = 0.0;
    double p_value = 1.0;  // two-sided, Student t with n - 2 degrees of freedom
    std::size_t n = 0;
};

/// Throws Error(LengthMismatch) or Error(ZeroVariance).
Correlation pearson_correlation(std::span<const double> xs, std::span<const double> ys);

/// Density of the mixture at x.
double mixture_pdf(const AggregateDistribution& dist, double x);

/// Evenly spaced (x, density) pairs across the bulk of the mixture.
std::vector<std::pair<double, double>> density_grid(const AggregateDistribution& dist, int points);

}  // namespace prefinfer
