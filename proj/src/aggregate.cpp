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
#include "prefinfer/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <boost/math/distributions/students_t.hpp>

#include "prefinfer/error.hpp"

namespace prefinfer {

namespace {

bool in_scope(const ElectionRecord& e, Scope scope) {
    return scope.kind == ScopeKind::State || (e.district && *e.district == scope.district);
}

}  // namespace

DistrictEstimate district_mean(const FitResult& fit, std::span<const ElectionRecord> elections, int district) {
    double weighted = 0.0;
    std::int64_t population = 0;
    int first = 0;
    int last = 0;
    for (const auto& e : elections) {
        if (!e.district || *e.district != district) continue;
        const int cluster = fit.cluster_of(e.precinct_id);
        weighted += static_cast<double>(e.total()) * mean(fit.map_params.eta[cluster]);
        if (population == 0) first = last = e.cycle;
        first = std::min(first, e.cycle);
        last = std::max(last, e.cycle);
        population += e.total();
    }
    if (population == 0) {
        throw Error(ErrorCode::EmptyDistrict, "district " + std::to_string(district) + " has no linked precincts");
    }
    return {district, {first, last}, weighted / static_cast<double>(population), population};
}

std::vector<DistrictEstimate> district_means(const FitResult& fit, std::span<const ElectionRecord> elections) {
    std::set<int> districts;
    for (const auto& e : elections) {
        if (e.district) districts.insert(*e.district);
    }
    std::vector<DistrictEstimate> out;
    for (int d : districts) out.push_back(district_mean(fit, elections, d));
    return out;
}

DistrictEstimate decade_mean(std::span<const DistrictEstimate> per_cycle) {
    if (per_cycle.empty()) throw Error(ErrorCode::EmptyDistrict, "decade aggregation needs at least one cycle");
    DistrictEstimate out;
    out.district = per_cycle.front().district;
    out.cycles = per_cycle.front().cycles;
    double weighted = 0.0;
    for (const auto& est : per_cycle) {
        if (est.district != out.district) {
            throw Error(ErrorCode::LengthMismatch, "decade aggregation mixes districts " +
                                                       std::to_string(out.district) + " and " +
                                                       std::to_string(est.district));
        }
        weighted += static_cast<double>(est.population) * est.mean;
        out.population += est.population;
        out.cycles.first = std::min(out.cycles.first, est.cycles.first);
        out.cycles.last = std::max(out.cycles.last, est.cycles.last);
    }
    if (out.population <= 0) throw Error(ErrorCode::EmptyDistrict, "decade aggregation over zero population");
    out.mean = weighted / static_cast<double>(out.population);
    return out;
}

AggregateDistribution scope_distribution(const FitResult& fit, std::span<const ElectionRecord> elections,
                                         Scope scope) {
    std::vector<std::int64_t> per_cluster(static_cast<std::size_t>(fit.k()), 0);
    std::int64_t population = 0;
    for (const auto& e : elections) {
        if (!in_scope(e, scope)) continue;
        per_cluster[fit.cluster_of(e.precinct_id)] += e.total();
        population += e.total();
    }
    if (population == 0) {
        throw Error(ErrorCode::EmptyScope, scope.kind == ScopeKind::State
                                               ? std::string("state scope has no precincts")
                                               : "district " + std::to_string(scope.district) + " has no precincts");
    }
    AggregateDistribution dist;
    dist.scope = scope.kind;
    dist.population = population;
    for (int c = 0; c < fit.k(); ++c) {
        if (per_cluster[c] == 0) continue;
        dist.components.push_back(
            {static_cast<double>(per_cluster[c]) / static_cast<double>(population), fit.map_params.eta[c]});
    }
    return dist;
}

double signed_log_transform(double x) {
    return std::copysign(std::log1p(std::abs(x)), x);
}

Correlation pearson_correlation(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw Error(ErrorCode::LengthMismatch, "correlation inputs differ in length (" + std::to_string(xs.size()) +
                                                   " vs " + std::to_string(ys.size()) + ")");
    }
    if (xs.size() < 3) throw Error(ErrorCode::LengthMismatch, "correlation needs at least 3 pairs");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw Error(ErrorCode::ZeroVariance, "correlation input has zero variance");
    Correlation out;
    out.n = xs.size();
    out.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    const double df = n - 2.0;
    if (df < 1.0 || std::abs(out.r) >= 1.0) {
        out.p_value = std::abs(out.r) >= 1.0 ? 0.0 : 1.0;
        return out;
    }
    const double t = out.r * std::sqrt(df / (1.0 - out.r * out.r));
    const boost::math::students_t dist(df);
    out.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
    return out;
}

double mixture_pdf(const AggregateDistribution& dist, double x) {
    double density = 0.0;
    for (const auto& wc : dist.components) density += wc.weight * pdf(wc.params, x);
    return density;
}

std::vector<std::pair<double, double>> density_grid(const AggregateDistribution& dist, int points) {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const auto& wc : dist.components) {
        const double sd = std::sqrt(central_moment(wc.params, 2));
        const double m = mean(wc.params);
        const double l = m - 4.0 * sd;
        const double h = m + 4.0 * sd;
        lo = first ? l : std::min(lo, l);
        hi = first ? h : std::max(hi, h);
        first = false;
    }
    std::vector<std::pair<double, double>> grid;
    if (points < 2 || first) return grid;
    for (int i = 0; i < points; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
        grid.emplace_back(x, mixture_pdf(dist, x));
    }
    return grid;
}

}  // namespace prefinfer
