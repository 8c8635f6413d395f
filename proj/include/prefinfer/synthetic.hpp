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

// Datasets drawn from the generative process itself, used as ground truth.
//
// Every precinct draws its cluster, candidates and voters from its own
// derived seed, so output does not depend on generation order.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "prefinfer/aggregate.hpp"
#include "prefinfer/ingest.hpp"
#include "prefinfer/model.hpp"
#include "prefinfer/sampler.hpp"

namespace prefinfer {

/// c0 ~ N(c0_mean, variance), c1 ~ N(c1_mean, variance), redrawn while equal.
/// With midpoint_spread > 0 both candidates also move by a shared
/// U(-spread, spread) offset, which spreads the decision boundaries.
struct CandidateGen {
    double c0_mean = -1.0;
    double c1_mean = 1.0;
    double variance = 0.25;
    double midpoint_spread = 0.0;
};

/// Voters of a precinct in cluster k come from
/// left_weight[k] * left + (1 - left_weight[k]) * right.
struct BimodalMode {
    ComponentParams left;
    ComponentParams right;
    std::vector<double> left_weight;  // one per planted cluster
};

struct SyntheticSpec {
    int precincts = 200;
    /// One entry applies to every precinct; otherwise one per precinct.
    std::vector<std::int64_t> voters{1000};
    MixtureParams planted;
    CandidateGen candidates;
    std::optional<BimodalMode> bimodal;
    std::uint64_t seed = 0;
    int districts = 10;
    std::string state = "SY";
    int cycle = 2008;
    /// Also emit one statewide Senate contest voted by every precinct.
    bool senate = false;

    /// Throws Error(InvalidSpec).
    void validate() const;
    [[nodiscard]] std::int64_t voters_in(int precinct) const;
};

struct VoterDraw {
    std::string precinct_id;
    double position = 0.0;
};

struct SyntheticData {
    std::vector<CandidateRecord> candidates;
    std::vector<ElectionRecord> elections;  // district already filled
    std::vector<int> assignments;           // planted cluster per precinct
    std::vector<PrecinctCenter> centers;
    std::vector<DistrictBoundary> boundaries;
};

std::string synthetic_precinct_id(int index);

SyntheticData generate(const SyntheticSpec& spec);

/// Next-cycle election for the same precincts and voters: cycle + 2, each
/// precinct's candidates shifted by `shift`, votes redrawn.
SyntheticData generate_followup(const SyntheticSpec& spec, const SyntheticData& base, double shift);

/// Draws one precinct's voters from its planted distribution.
std::vector<VoterDraw> draw_voters(const SyntheticSpec& spec, int precinct, int cluster, std::int64_t count,
                                   Rng& rng);

/// Planted electorate of the whole state, weighted by ballots per precinct.
AggregateDistribution planted_state_distribution(const SyntheticSpec& spec, const SyntheticData& data);

struct RecoveryScore {
    double param_error = 0.0;         // max abs component-parameter error
    double assignment_accuracy = 0.0;
    std::vector<int> permutation;     // fitted cluster -> planted cluster
};

/// M = 200, N = 1000, theta = (0.5, 0.5), Normal(-2, 0.5) and Normal(2, 0.5),
/// candidate midpoints spread by U(-2, 2).
SyntheticSpec standard_scenario(std::uint64_t seed);

/// Two planted precinct types whose voters are both drawn from
/// {Normal(-2, 0.5), Normal(2, 0.5)} with left weights 0.85 and 0.15.
SyntheticSpec bimodal_scenario(std::uint64_t seed);

/// Overlapping clusters near the candidates, used for the prediction tasks.
SyntheticSpec prediction_scenario(std::uint64_t seed);

/// Looks up one of the named scenarios above. Throws Error(InvalidSpec).
SyntheticSpec named_scenario(const std::string& name, std::uint64_t seed);

/// Best label permutation (minimum param_error). Throws Error(KMismatch).
RecoveryScore recovery_score(const FitResult& fit, const SyntheticSpec& spec, const SyntheticData& data);

}  // namespace prefinfer
