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
#include "prefinfer/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "prefinfer/error.hpp"

namespace prefinfer {

void MixtureParams::validate() const {
    if (eta.empty() || theta.size() != eta.size()) {
        throw Error(ErrorCode::InvalidSimplex, "theta and eta must both have K >= 1 entries (theta " +
                                                   std::to_string(theta.size()) + ", eta " +
                                                   std::to_string(eta.size()) + ")");
    }
    double sum = 0.0;
    for (double t : theta) {
        if (!(t >= 0.0) || !std::isfinite(t)) {
            throw Error(ErrorCode::InvalidSimplex, "theta entries must be finite and non-negative");
        }
        sum += t;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw Error(ErrorCode::InvalidSimplex, "theta must sum to 1 (sum = " + format_double(sum) + ")");
    }
    for (const auto& c : eta) {
        if (c.family != eta.front().family) {
            throw Error(ErrorCode::InvalidParams, "all components must share one family");
        }
        if (!std::isfinite(c.a) || !std::isfinite(c.b) || !(c.b > 0.0)) {
            throw Error(ErrorCode::InvalidParams, "component parameters must satisfy finite a and b > 0");
        }
    }
}

std::vector<PrecinctObs> build_observations(std::span<const ElectionRecord> elections,
                                            const CandidateIndex& candidates) {
    std::vector<PrecinctObs> out;
    out.reserve(elections.size());
    for (const auto& e : elections) {
        const auto& c0 = candidates.at(e.cand0_id, e.cycle, e.office);
        const auto& c1 = candidates.at(e.cand1_id, e.cycle, e.office);
        out.push_back({e.precinct_id, c0.cfscore, c1.cfscore, e.n0, e.n1});
    }
    return out;
}

VoteProbability vote_probability(const ComponentParams& component, double c0, double c1) {
    if (c0 == c1) return {0.5, 0.5};
    const double m = 0.5 * (c0 + c1);
    double below = cdf(component, m);
    double above = ccdf(component, m);
    VoteProbability out = c0 < c1 ? VoteProbability{below, above} : VoteProbability{above, below};
    out.p0 = std::max(out.p0, kPhiFloor);
    out.p1 = std::max(out.p1, kPhiFloor);
    return out;
}

double precinct_component_log_term(const PrecinctObs& precinct, const ComponentParams& component) {
    const auto vp = vote_probability(component, precinct.c0, precinct.c1);
    double term = 0.0;
    if (precinct.n0 > 0) term += static_cast<double>(precinct.n0) * std::log(vp.p0);
    if (precinct.n1 > 0) term += static_cast<double>(precinct.n1) * std::log(vp.p1);
    return term;
}

double log_sum_exp(std::span<const double> values) {
    double hi = -std::numeric_limits<double>::infinity();
    for (double v : values) hi = std::max(hi, v);
    if (!std::isfinite(hi)) return hi;
    double acc = 0.0;
    for (double v : values) acc += std::exp(v - hi);
    return hi + std::log(acc);
}

double precinct_log_marginal(const MixtureParams& params, const PrecinctObs& precinct) {
    std::vector<double> terms(params.eta.size());
    for (std::size_t k = 0; k < params.eta.size(); ++k) {
        terms[k] = std::log(params.theta[k]) + precinct_component_log_term(precinct, params.eta[k]);
    }
    return log_sum_exp(terms);
}

double log_likelihood(const MixtureParams& params, std::span<const PrecinctObs> data) {
    if (data.empty()) throw Error(ErrorCode::EmptyDataset, "log-likelihood needs at least one precinct");
    double total = 0.0;
    for (const auto& precinct : data) total += precinct_log_marginal(params, precinct);
    return total;
}

double log_dirichlet_one(int k) { return std::lgamma(static_cast<double>(k)); }

double log_posterior(const MixtureParams& params, std::span<const PrecinctObs> data) {
    params.validate();
    double lp = log_likelihood(params, data) + log_dirichlet_one(params.k());
    for (const auto& c : params.eta) lp += log_prior(c);
    return lp;
}

double log_binomial(std::int64_t n, std::int64_t k) {
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

double mc_oracle_likelihood(const MixtureParams& params, const PrecinctObs& precinct,
                            std::int64_t samples, Rng& rng) {
    params.validate();
    std::vector<double> cumulative(params.theta.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < params.theta.size(); ++k) cumulative[k] = (acc += params.theta[k]);

    std::int64_t hits = 0;
    for (std::int64_t s = 0; s < samples; ++s) {
        const double u = rng.uniform() * acc;
        std::size_t cluster = 0;
        while (cluster + 1 < cumulative.size() && u >= cumulative[cluster]) ++cluster;
        const auto& component = params.eta[cluster];
        std::int64_t n0 = 0;
        for (std::int64_t j = 0; j < precinct.total(); ++j) {
            if (votes_for_candidate0(sample(component, rng), precinct.c0, precinct.c1)) ++n0;
        }
        if (n0 == precinct.n0) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(samples);
}

}  // namespace prefinfer
