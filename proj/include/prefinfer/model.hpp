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

// Marginalized likelihood of the mixture of spatial voting models.
//
// A voter at v supports candidate 0 iff |v - c0| < |v - c1|, i.e. iff v lies on
// candidate 0's side of the midpoint (c0 + c1) / 2. After integrating voter
// positions out, precinct i under cluster k contributes
//     theta_k * phi^n0 * (1 - phi)^n1,
// where phi is the cluster's probability mass on candidate 0's side.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "prefinfer/components.hpp"
#include "prefinfer/ingest.hpp"
#include "prefinfer/rng.hpp"

namespace prefinfer {

inline constexpr double kPhiFloor = 1e-300;

struct MixtureParams {
    std::vector<double> theta;
    std::vector<ComponentParams> eta;

    [[nodiscard]] int k() const { return static_cast<int>(eta.size()); }
    [[nodiscard]] Family family() const { return eta.empty() ? Family::Normal : eta.front().family; }

    /// Throws Error(InvalidSimplex) or Error(InvalidParams).
    void validate() const;
};

/// Observed contest in one precinct with candidate positions resolved.
struct PrecinctObs {
    std::string precinct_id;
    double c0 = 0.0;  // Democrat
    double c1 = 0.0;
    std::int64_t n0 = 0;
    std::int64_t n1 = 0;

    [[nodiscard]] double midpoint() const { return 0.5 * (c0 + c1); }
    [[nodiscard]] std::int64_t total() const { return n0 + n1; }
};

/// Resolves candidate scores for each election. Throws Error(UnknownCandidate).
std::vector<PrecinctObs> build_observations(std::span<const ElectionRecord> elections,
                                            const CandidateIndex& candidates);

/// Probability of a candidate-0 vote and its complement, each floored at kPhiFloor.
struct VoteProbability {
    double p0 = 0.5;
    double p1 = 0.5;
};

VoteProbability vote_probability(const ComponentParams& component, double c0, double c1);

/// Phi for a precinct: the component mass on candidate 0's side of the midpoint.
inline double phi(const PrecinctObs& precinct, const ComponentParams& component) {
    return vote_probability(component, precinct.c0, precinct.c1).p0;
}

/// n0 log phi + n1 log(1 - phi), without the mixture weight.
double precinct_component_log_term(const PrecinctObs& precinct, const ComponentParams& component);

/// log sum_k theta_k phi_k^n0 (1 - phi_k)^n1 (no binomial coefficient).
double precinct_log_marginal(const MixtureParams& params, const PrecinctObs& precinct);

double log_sum_exp(std::span<const double> values);

/// Throws Error(EmptyDataset) for empty data.
double log_likelihood(const MixtureParams& params, std::span<const PrecinctObs> data);

/// log (K-1)!, the constant density of a symmetric Dirichlet(1) on the K-simplex.
double log_dirichlet_one(int k);

/// Likelihood + component priors + Dirichlet(1) prior. Throws Error(InvalidSimplex).
double log_posterior(const MixtureParams& params, std::span<const PrecinctObs> data);

/// log C(n, k).
double log_binomial(std::int64_t n, std::int64_t k);

/// Brute-force check of the marginalization: simulates `samples` replicates
/// of the generative process (cluster draw, voter draws, nearest-candidate
/// vote) and returns the fraction reproducing the observed counts exactly.
double mc_oracle_likelihood(const MixtureParams& params, const PrecinctObs& precinct,
                            std::int64_t samples, Rng& rng);

/// Nearest-candidate rule; ties go to candidate 1.
inline bool votes_for_candidate0(double v, double c0, double c1) {
    return std::abs(v - c0) < std::abs(v - c1);
}

}  // namespace prefinfer
