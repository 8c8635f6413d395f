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
#include "prefinfer/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "prefinfer/error.hpp"

namespace prefinfer {

namespace {

constexpr double kLonOrigin = -100.0;
constexpr double kLatOrigin = 30.0;
constexpr double kCell = 0.5;

int draw_cluster(const std::vector<double>& theta, Rng& rng) {
    const double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < theta.size(); ++k) {
        acc += theta[k];
        if (u < acc) return static_cast<int>(k);
    }
    return static_cast<int>(theta.size()) - 1;
}

std::pair<double, double> draw_candidates(const CandidateGen& gen, Rng& rng) {
    const double sd = std::sqrt(gen.variance);
    double c0, c1;
    do {
        c0 = rng.normal(gen.c0_mean, sd);
        c1 = rng.normal(gen.c1_mean, sd);
    } while (c0 == c1);
    if (gen.midpoint_spread > 0.0) {
        const double offset = gen.midpoint_spread * (2.0 * rng.uniform() - 1.0);
        c0 += offset;
        c1 += offset;
    }
    return {c0, c1};
}

std::int64_t count_candidate0(const std::vector<VoterDraw>& voters, double c0, double c1) {
    std::int64_t n0 = 0;
    for (const auto& v : voters) {
        if (votes_for_candidate0(v.position, c0, c1)) ++n0;
    }
    return n0;
}

int district_of(const SyntheticSpec& spec, int precinct) { return precinct % spec.districts + 1; }

DistrictBoundary district_square(const SyntheticSpec& spec, int district) {
    const double lon0 = kLonOrigin + kCell * (district - 1);
    DistrictBoundary b;
    b.district = district;
    b.state = spec.state;
    b.rings.push_back({{lon0, kLatOrigin},
                       {lon0 + kCell, kLatOrigin},
                       {lon0 + kCell, kLatOrigin + kCell},
                       {lon0, kLatOrigin + kCell},
                       {lon0, kLatOrigin}});
    return b;
}

std::string candidate_id(char party, const std::string& precinct_id) {
    return std::string(1, party) + "-" + precinct_id;
}

}  // namespace

void SyntheticSpec::validate() const {
    if (precincts < 1) throw Error(ErrorCode::InvalidSpec, "need at least one precinct");
    if (voters.empty() || (voters.size() != 1 && voters.size() != static_cast<std::size_t>(precincts))) {
        throw Error(ErrorCode::InvalidSpec, "voters must have one entry or one per precinct");
    }
    for (auto n : voters) {
        if (n < 1) throw Error(ErrorCode::InvalidSpec, "every precinct needs at least one voter");
    }
    if (districts < 1 || districts > 600) throw Error(ErrorCode::InvalidSpec, "districts must be in 1..600");
    if (!(candidates.variance >= 0.0) || !(candidates.midpoint_spread >= 0.0)) {
        throw Error(ErrorCode::InvalidSpec, "candidate variance and spread must be non-negative");
    }
    if (candidates.variance == 0.0 && candidates.c0_mean == candidates.c1_mean) {
        throw Error(ErrorCode::InvalidSpec, "candidate rule can never produce distinct positions");
    }
    try {
        planted.validate();
    } catch (const Error& e) {
        throw Error(ErrorCode::InvalidSpec, std::string("planted parameters: ") + e.what());
    }
    if (bimodal && bimodal->left_weight.size() != planted.theta.size()) {
        throw Error(ErrorCode::InvalidSpec, "bimodal mode needs one left weight per planted cluster");
    }
    if (bimodal) {
        for (double w : bimodal->left_weight) {
            if (!(w >= 0.0 && w <= 1.0)) throw Error(ErrorCode::InvalidSpec, "bimodal weights must lie in [0, 1]");
        }
    }
}

std::int64_t SyntheticSpec::voters_in(int precinct) const {
    return voters.size() == 1 ? voters.front() : voters[static_cast<std::size_t>(precinct)];
}

std::string synthetic_precinct_id(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "P%05d", index + 1);
    return buf;
}

std::vector<VoterDraw> draw_voters(const SyntheticSpec& spec, int precinct, int cluster, std::int64_t count,
                                   Rng& rng) {
    const std::string id = synthetic_precinct_id(precinct);
    std::vector<VoterDraw> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::int64_t j = 0; j < count; ++j) {
        double v;
        if (spec.bimodal) {
            const bool left = rng.uniform() < spec.bimodal->left_weight[cluster];
            v = sample(left ? spec.bimodal->left : spec.bimodal->right, rng);
        } else {
            v = sample(spec.planted.eta[cluster], rng);
        }
        out.push_back({id, v});
    }
    return out;
}

SyntheticData generate(const SyntheticSpec& spec) {
    spec.validate();
    SyntheticData data;
    std::pair<double, double> senate_pos{0.0, 0.0};
    if (spec.senate) {
        Rng rng(derive_seed(spec.seed, "senate"));
        senate_pos = draw_candidates(spec.candidates, rng);
        data.candidates.push_back({"SEN-D", senate_pos.first, Party::Democrat, spec.state, 1, spec.cycle, Office::Senate});
        data.candidates.push_back({"SEN-R", senate_pos.second, Party::Republican, spec.state, 1, spec.cycle, Office::Senate});
    }
    std::vector<ElectionRecord> senate_rows;
    for (int i = 0; i < spec.precincts; ++i) {
        Rng rng(derive_seed(spec.seed, "precinct", static_cast<std::uint64_t>(i)));
        const std::string id = synthetic_precinct_id(i);
        const int district = district_of(spec, i);
        const int cluster = draw_cluster(spec.planted.theta, rng);
        const auto [c0, c1] = draw_candidates(spec.candidates, rng);
        const std::int64_t n = spec.voters_in(i);
        const auto voters = draw_voters(spec, i, cluster, n, rng);

        data.assignments.push_back(cluster);
        data.candidates.push_back({candidate_id('D', id), c0, Party::Democrat, spec.state, district, spec.cycle, Office::House});
        data.candidates.push_back({candidate_id('R', id), c1, Party::Republican, spec.state, district, spec.cycle, Office::House});
        const std::int64_t n0 = count_candidate0(voters, c0, c1);
        data.elections.push_back({id, spec.state, spec.cycle, Office::House, candidate_id('D', id),
                                  candidate_id('R', id), n0, n - n0, district});
        if (spec.senate) {
            const std::int64_t s0 = count_candidate0(voters, senate_pos.first, senate_pos.second);
            senate_rows.push_back({id, spec.state, spec.cycle, Office::Senate, "SEN-D", "SEN-R", s0, n - s0, district});
        }

        const double lon0 = kLonOrigin + kCell * (district - 1);
        data.centers.push_back({id, lon0 + kCell * (0.1 + 0.8 * rng.uniform()),
                                kLatOrigin + kCell * (0.1 + 0.8 * rng.uniform())});
    }
    data.elections.insert(data.elections.end(), senate_rows.begin(), senate_rows.end());
    for (int d = 1; d <= spec.districts; ++d) data.boundaries.push_back(district_square(spec, d));
    return data;
}

SyntheticData generate_followup(const SyntheticSpec& spec, const SyntheticData& base, double shift) {
    spec.validate();
    if (base.assignments.size() != static_cast<std::size_t>(spec.precincts)) {
        throw Error(ErrorCode::InvalidSpec, "base data does not match the spec's precinct count");
    }
    CandidateIndex index(base.candidates);
    SyntheticData out;
    out.assignments = base.assignments;
    out.centers = base.centers;
    out.boundaries = base.boundaries;
    const int cycle = spec.cycle + 2;
    for (int i = 0; i < spec.precincts; ++i) {
        Rng rng(derive_seed(spec.seed, "followup", static_cast<std::uint64_t>(i)));
        const std::string id = synthetic_precinct_id(i);
        const int district = district_of(spec, i);
        const double c0 = index.at(candidate_id('D', id), spec.cycle, Office::House).cfscore + shift;
        const double c1 = index.at(candidate_id('R', id), spec.cycle, Office::House).cfscore + shift;
        const std::int64_t n = spec.voters_in(i);
        const auto voters = draw_voters(spec, i, base.assignments[i], n, rng);
        out.candidates.push_back({candidate_id('D', id), c0, Party::Democrat, spec.state, district, cycle, Office::House});
        out.candidates.push_back({candidate_id('R', id), c1, Party::Republican, spec.state, district, cycle, Office::House});
        const std::int64_t n0 = count_candidate0(voters, c0, c1);
        out.elections.push_back({id, spec.state, cycle, Office::House, candidate_id('D', id), candidate_id('R', id),
                                 n0, n - n0, district});
    }
    return out;
}

AggregateDistribution planted_state_distribution(const SyntheticSpec& spec, const SyntheticData& data) {
    const int k = spec.planted.k();
    std::vector<double> per_cluster(static_cast<std::size_t>(k), 0.0);
    std::int64_t population = 0;
    for (int i = 0; i < spec.precincts; ++i) {
        per_cluster[data.assignments[i]] += static_cast<double>(spec.voters_in(i));
        population += spec.voters_in(i);
    }
    AggregateDistribution dist;
    dist.population = population;
    const double total = static_cast<double>(population);
    if (spec.bimodal) {
        double left = 0.0;
        for (int c = 0; c < k; ++c) left += per_cluster[c] * spec.bimodal->left_weight[c];
        if (left > 0.0) dist.components.push_back({left / total, spec.bimodal->left});
        if (total - left > 0.0) dist.components.push_back({(total - left) / total, spec.bimodal->right});
    } else {
        for (int c = 0; c < k; ++c) {
            if (per_cluster[c] > 0.0) dist.components.push_back({per_cluster[c] / total, spec.planted.eta[c]});
        }
    }
    return dist;
}

SyntheticSpec standard_scenario(std::uint64_t seed) {
    SyntheticSpec spec;
    spec.precincts = 200;
    spec.voters = {1000};
    spec.planted.theta = {0.5, 0.5};
    spec.planted.eta = {ComponentParams::make(Family::Normal, -2.0, 0.5),
                        ComponentParams::make(Family::Normal, 2.0, 0.5)};
    spec.candidates.midpoint_spread = 2.0;
    spec.seed = seed;
    return spec;
}

SyntheticSpec bimodal_scenario(std::uint64_t seed) {
    SyntheticSpec spec = standard_scenario(seed);
    spec.bimodal = BimodalMode{ComponentParams::make(Family::Normal, -2.0, 0.5),
                               ComponentParams::make(Family::Normal, 2.0, 0.5), {0.85, 0.15}};
    return spec;
}

SyntheticSpec prediction_scenario(std::uint64_t seed) {
    SyntheticSpec spec = standard_scenario(seed);
    spec.planted.eta = {ComponentParams::make(Family::Normal, -0.6, 1.0),
                        ComponentParams::make(Family::Normal, 0.7, 0.8)};
    spec.candidates.midpoint_spread = 1.0;
    return spec;
}

SyntheticSpec named_scenario(const std::string& name, std::uint64_t seed) {
    if (name == "standard") return standard_scenario(seed);
    if (name == "bimodal") return bimodal_scenario(seed);
    if (name == "prediction") return prediction_scenario(seed);
    throw Error(ErrorCode::InvalidSpec, "unknown scenario '" + name + "' (standard, bimodal, prediction)");
}

RecoveryScore recovery_score(const FitResult& fit, const SyntheticSpec& spec, const SyntheticData& data) {
    const int k = spec.planted.k();
    if (fit.k() != k) {
        throw Error(ErrorCode::KMismatch, "fit has K=" + std::to_string(fit.k()) + " but the scenario planted K=" +
                                              std::to_string(k));
    }
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    RecoveryScore best;
    bool first = true;
    do {
        double err = 0.0;
        for (int c = 0; c < k; ++c) {
            const auto& f = fit.map_params.eta[c];
            const auto& p = spec.planted.eta[perm[c]];
            err = std::max({err, std::abs(f.a - p.a), std::abs(f.b - p.b)});
        }
        if (first || err < best.param_error) {
            best.param_error = err;
            best.permutation = perm;
            first = false;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    std::int64_t correct = 0;
    for (int i = 0; i < spec.precincts; ++i) {
        const int fitted = fit.cluster_of(synthetic_precinct_id(i));
        if (best.permutation[fitted] == data.assignments[i]) ++correct;
    }
    best.assignment_accuracy = static_cast<double>(correct) / static_cast<double>(spec.precincts);
    return best;
}

}  // namespace prefinfer
