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
#include <cmath>

#include <doctest.h>

#include "prefinfer/error.hpp"
#include "prefinfer/polarization.hpp"
#include "prefinfer/synthetic.hpp"
#include "support.hpp"

using namespace prefinfer;
using prefinfer::testing::normal_cdf_oracle;

namespace {

SyntheticSpec fixed_candidates(ComponentParams component, double c0, double c1, std::int64_t voters, int precincts) {
    SyntheticSpec spec;
    spec.precincts = precincts;
    spec.voters = {voters};
    spec.planted = {{1.0}, {component}};
    spec.candidates = {c0, c1, 0.0, 0.0};
    spec.districts = 2;
    spec.seed = 42;
    return spec;
}

FitResult planted_fit(const SyntheticSpec& spec, const SyntheticData& data) {
    FitResult f;
    f.map_params = spec.planted;
    for (int i = 0; i < spec.precincts; ++i) f.assignments[synthetic_precinct_id(i)] = data.assignments[i];
    return f;
}

}  // namespace

TEST_CASE("vote counts follow the spatial rule") {
    SUBCASE("all voters left of the midpoint") {
        const auto spec = fixed_candidates({Family::Uniform, -3, 1e-6}, -1, 1, 500, 3);
        for (const auto& e : generate(spec).elections) {
            CHECK(e.n0 == 500);
            CHECK(e.n1 == 0);
        }
    }
    SUBCASE("symmetric case") {
        const auto spec = fixed_candidates({Family::Normal, 0, 1}, -1, 1, 100000, 1);
        const auto e = generate(spec).elections.front();
        CHECK(std::abs(static_cast<double>(e.n0) / 1e5 - 0.5) < 0.01);
    }
    SUBCASE("planted phi 0.8413") {
        const auto spec = fixed_candidates({Family::Normal, 0, 1}, 0, 2, 100000, 1);
        const auto e = generate(spec).elections.front();
        CHECK(std::abs(normal_cdf_oracle(1.0, 0.0, 1.0) - 0.8413) < 1e-4);
        CHECK(std::abs(static_cast<double>(e.n0) / 1e5 - 0.8413) < 0.005);
    }
}

TEST_CASE("shares converge to phi within binomial bounds") {
    SyntheticSpec spec;
    spec.precincts = 30;
    spec.voters = {100000};
    spec.planted = {{0.3, 0.7}, {{Family::Laplace, -0.8, 0.6}, {Family::Laplace, 0.9, 1.1}}};
    spec.seed = 8;
    const auto data = generate(spec);
    const CandidateIndex idx(data.candidates);
    const auto obs = build_observations(data.elections, idx);
    for (int i = 0; i < spec.precincts; ++i) {
        const double p = phi(obs[i], spec.planted.eta[data.assignments[i]]);
        const double share = static_cast<double>(obs[i].n0) / 1e5;
        CHECK(std::abs(share - p) <= 3 * std::sqrt(p * (1 - p) / 1e5) + 1e-12);
        CHECK(obs[i].c0 != obs[i].c1);
    }
}

TEST_CASE("generation is deterministic and independent of precinct count") {
    auto spec = standard_scenario(3);
    spec.precincts = 40;
    const auto a = generate(spec);
    const auto b = generate(spec);
    CHECK(a.elections == b.elections);
    CHECK(a.candidates == b.candidates);
    spec.precincts = 80;
    const auto c = generate(spec);
    for (int i = 0; i < 40; ++i) {
        CHECK(c.elections[i] == a.elections[i]);
        CHECK(c.assignments[i] == a.assignments[i]);
    }
    spec.seed = 4;
    CHECK(generate(spec).elections[0] != c.elections[0]);
}

TEST_CASE("planted cluster frequencies follow theta") {
    SyntheticSpec spec;
    spec.precincts = 4000;
    spec.voters = {1};
    spec.planted = {{0.2, 0.5, 0.3}, {{Family::Normal, -1, 1}, {Family::Normal, 0, 1}, {Family::Normal, 1, 1}}};
    const auto data = generate(spec);
    std::vector<double> counts(3, 0.0);
    for (int x : data.assignments) counts[x] += 1;
    for (int k = 0; k < 3; ++k) {
        const double p = spec.planted.theta[k];
        CHECK(std::abs(counts[k] / 4000 - p) < 3 * std::sqrt(p * (1 - p) / 4000));
    }
}

TEST_CASE("geometry links every precinct to its district") {
    auto spec = standard_scenario(1);
    spec.precincts = 60;
    spec.districts = 7;
    const auto data = generate(spec);
    CHECK(data.boundaries.size() == 7);
    auto unlinked = data.elections;
    for (auto& e : unlinked) e.district.reset();
    const auto linked = link_districts(unlinked, data.centers, data.boundaries);
    CHECK(linked.unmatched.empty());
    CHECK(linked.warnings.empty());
    for (std::size_t i = 0; i < data.elections.size(); ++i) CHECK(linked.elections[i].district == data.elections[i].district);
}

TEST_CASE("senate contest and follow-up cycle") {
    auto spec = prediction_scenario(2);
    spec.precincts = 20;
    spec.senate = true;
    const auto data = generate(spec);
    CHECK(data.elections.size() == 40);
    const CandidateIndex idx(data.candidates);
    CHECK(idx.find("SEN-D", spec.cycle, Office::Senate) != nullptr);
    for (int i = 0; i < 20; ++i) {
        const auto& h = data.elections[i];
        const auto& s = data.elections[20 + i];
        CHECK(s.office == Office::Senate);
        CHECK(s.precinct_id == h.precinct_id);
        CHECK(s.total() == h.total());
    }

    const auto next = generate_followup(spec, data, 0.5);
    CHECK(next.assignments == data.assignments);
    const CandidateIndex nidx(next.candidates);
    for (int i = 0; i < 20; ++i) {
        const auto& e = next.elections[i];
        CHECK(e.cycle == spec.cycle + 2);
        const double before = idx.at(data.elections[i].cand0_id, spec.cycle, Office::House).cfscore;
        CHECK(nidx.at(e.cand0_id, e.cycle, Office::House).cfscore == doctest::Approx(before + 0.5).epsilon(1e-15));
        CHECK(e.total() == data.elections[i].total());
    }
}

TEST_CASE("spec validation") {
    auto bad = standard_scenario(0);
    bad.precincts = 0;
    CHECK_THROWS_AS(generate(bad), Error);
    bad = standard_scenario(0);
    bad.voters = {10, 20};
    CHECK_THROWS_AS(generate(bad), Error);
    bad = standard_scenario(0);
    bad.planted.theta = {0.7, 0.7};
    CHECK_THROWS_AS(generate(bad), Error);
    bad = standard_scenario(0);
    bad.candidates = {0.5, 0.5, 0.0, 0.0};
    CHECK_THROWS_AS(generate(bad), Error);
    bad = bimodal_scenario(0);
    bad.bimodal->left_weight = {0.5};
    CHECK_THROWS_AS(generate(bad), Error);
    CHECK_THROWS_AS(named_scenario("nope", 0), Error);
    CHECK(named_scenario("bimodal", 5).bimodal.has_value());
    CHECK(named_scenario("standard", 5).seed == 5);
}

TEST_CASE("planted bimodal state distribution") {
    const auto spec = bimodal_scenario(7);
    const auto data = generate(spec);
    const auto truth = planted_state_distribution(spec, data);
    REQUIRE(truth.components.size() == 2);
    CHECK(truth.components[0].weight + truth.components[1].weight == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(mixture_excess_kurtosis(truth) < 0.0);

    // Every precinct draws from both modes, so both sides of zero are populated.
    Rng rng(1);
    const auto voters = draw_voters(spec, 0, 0, 20000, rng);
    double left = 0;
    for (const auto& v : voters) left += v.position < 0;
    CHECK(std::abs(left / 20000 - 0.85) < 0.01);
}

TEST_CASE("recovery score") {
    auto spec = standard_scenario(0);
    spec.precincts = 50;
    const auto data = generate(spec);
    const auto self = recovery_score(planted_fit(spec, data), spec, data);
    CHECK(self.param_error == 0.0);
    CHECK(self.assignment_accuracy == 1.0);

    FitResult swapped = planted_fit(spec, data);
    std::swap(swapped.map_params.eta[0], swapped.map_params.eta[1]);
    std::swap(swapped.map_params.theta[0], swapped.map_params.theta[1]);
    for (auto& [id, c] : swapped.assignments) c = 1 - c;
    const auto s = recovery_score(swapped, spec, data);
    CHECK(s.param_error == 0.0);
    CHECK(s.assignment_accuracy == 1.0);
    CHECK(s.permutation == std::vector<int>{1, 0});

    FitResult off = planted_fit(spec, data);
    off.map_params.eta[1].a += 0.07;
    CHECK(recovery_score(off, spec, data).param_error == doctest::Approx(0.07).epsilon(1e-12));

    FitResult one = planted_fit(spec, data);
    one.map_params = {{1.0}, {spec.planted.eta[0]}};
    try {
        (void)recovery_score(one, spec, data);
        FAIL("expected KMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::KMismatch);
    }
}
