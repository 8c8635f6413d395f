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
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include <doctest.h>

#include "prefinfer/error.hpp"
#include "prefinfer/model.hpp"
#include "support.hpp"

using namespace prefinfer;
using prefinfer::testing::normal_cdf_oracle;

namespace {

MixtureParams two_normals() {
    return {{0.5, 0.5}, {{Family::Normal, -2, 1}, {Family::Normal, 2, 1}}};
}

std::vector<PrecinctObs> random_precincts(Rng& rng, int count) {
    std::vector<PrecinctObs> out;
    for (int i = 0; i < count; ++i) {
        const double c0 = rng.normal(-1.0, 0.8);
        const double c1 = rng.normal(1.0, 0.8);
        const auto n = static_cast<std::int64_t>(1 + rng.below(200));
        const auto n0 = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n) + 1));
        out.push_back({"p" + std::to_string(i), c0, c1, n0, n - n0});
    }
    return out;
}

MixtureParams random_params(Rng& rng, int k, Family f) {
    MixtureParams p;
    double sum = 0.0;
    for (int i = 0; i < k; ++i) {
        p.theta.push_back(rng.exponential());
        sum += p.theta.back();
        p.eta.push_back({f, rng.normal(0.0, 2.0), 0.2 + 2.0 * rng.uniform()});
    }
    for (auto& t : p.theta) t /= sum;
    return p;
}

}  // namespace

TEST_CASE("phi examples") {
    const PrecinctObs sym{"x", -1, 1, 1, 1};
    CHECK(phi(sym, {Family::Normal, 0, 1}) == doctest::Approx(0.5).epsilon(1e-15));
    const PrecinctObs flipped{"x", 1, -1, 1, 1};
    CHECK(phi(flipped, {Family::Normal, 0, 1}) == doctest::Approx(0.5).epsilon(1e-15));
    const double oracle = normal_cdf_oracle(0.0, -2.0, 1.0);
    CHECK(std::abs(oracle - 0.977250) < 1e-6);
    CHECK(phi(sym, {Family::Normal, -2, 1}) == doctest::Approx(oracle).epsilon(1e-14));
    CHECK(phi(PrecinctObs{"x", 0.3, 0.3, 1, 1}, {Family::Normal, -2, 1}) == 0.5);
}

TEST_CASE("phi uses the midpoint of non-centred candidates") {
    // Candidates at 1 and 3: boundary at 2, not at the half-distance 1.
    const PrecinctObs p{"x", 1, 3, 1, 1};
    CHECK(phi(p, {Family::Normal, 2, 1}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(phi(p, {Family::Normal, 0, 1}) == doctest::Approx(normal_cdf_oracle(2.0, 0.0, 1.0)).epsilon(1e-14));
}

TEST_CASE("phi is floored away from zero and one") {
    const PrecinctObs p{"x", -1, 1, 1000, 1000};
    const auto vp = vote_probability({Family::Uniform, 5, 1}, p.c0, p.c1);
    CHECK(vp.p0 == kPhiFloor);
    CHECK(vp.p1 == 1.0);
    const MixtureParams far{{1.0}, {{Family::Normal, 60, 1}}};
    CHECK(std::isfinite(log_likelihood(far, std::vector<PrecinctObs>{p})));
}

TEST_CASE("log likelihood examples") {
    const std::vector<PrecinctObs> one{{"x", -1, 1, 3, 1}};
    const MixtureParams k1{{1.0}, {{Family::Normal, 0, 1}}};
    CHECK(log_likelihood(k1, one) == doctest::Approx(4.0 * std::log(0.5)).epsilon(1e-14));
    CHECK(log_likelihood(k1, one) == doctest::Approx(-2.772589).epsilon(1e-6));

    const MixtureParams dup{{0.5, 0.5}, {{Family::Normal, 0, 1}, {Family::Normal, 0, 1}}};
    CHECK(log_likelihood(dup, one) == doctest::Approx(log_likelihood(k1, one)).epsilon(1e-15));

    const std::vector<PrecinctObs> nine{{"x", -1, 1, 9, 1}};
    const double p = normal_cdf_oracle(0.0, -2.0, 1.0);
    const double q = 1.0 - p;
    const double oracle = std::log(0.5 * std::pow(p, 9) * q + 0.5 * std::pow(q, 9) * p);
    CHECK(log_likelihood(two_normals(), nine) == doctest::Approx(oracle).epsilon(1e-12));
    // 30-digit reference value.
    CHECK(std::abs(log_likelihood(two_normals(), nine) - (-4.683447698202562)) < 1e-12);
}

TEST_CASE("log likelihood rejects empty data") {
    try {
        (void)log_likelihood(two_normals(), std::vector<PrecinctObs>{});
        FAIL("expected EmptyDataset");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyDataset);
    }
}

TEST_CASE("log posterior") {
    const std::vector<PrecinctObs> one{{"x", -1, 1, 3, 1}};
    const MixtureParams k1{{1.0}, {{Family::Normal, 0, 1}}};
    CHECK(log_dirichlet_one(1) == 0.0);
    CHECK(log_dirichlet_one(3) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(log_dirichlet_one(5) == doctest::Approx(std::log(24.0)).epsilon(1e-15));
    CHECK(log_posterior(k1, one) == doctest::Approx(log_likelihood(k1, one) + log_prior(k1.eta[0])).epsilon(1e-15));

    const std::vector<PrecinctObs> nine{{"x", -1, 1, 9, 1}};
    const double loc = [](double a) { return -0.5 * std::log(2 * std::numbers::pi * 100) - a * a / 200; }(2.0);
    const double hand = log_likelihood(two_normals(), nine) + std::log(1.0) + 2 * (loc - 1.0);
    CHECK(log_posterior(two_normals(), nine) == doctest::Approx(hand).epsilon(1e-14));

    MixtureParams bad = two_normals();
    bad.theta = {0.6, 0.6};
    try {
        (void)log_posterior(bad, nine);
        FAIL("expected InvalidSimplex");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidSimplex);
    }
    bad.theta = {0.5, 0.5};
    bad.eta[1].family = Family::Laplace;
    CHECK_THROWS_AS((void)log_posterior(bad, nine), Error);
}

TEST_CASE("log likelihood invariances") {
    Rng rng(17);
    for (Family f : {Family::Normal, Family::Laplace, Family::Uniform}) {
        const auto data = random_precincts(rng, 40);
        const auto params = random_params(rng, 3, f);
        const double base = log_likelihood(params, data);

        SUBCASE("joint permutation of theta and eta") {
            std::vector<int> perm{0, 1, 2};
            while (std::next_permutation(perm.begin(), perm.end())) {
                MixtureParams p;
                for (int i : perm) {
                    p.theta.push_back(params.theta[i]);
                    p.eta.push_back(params.eta[i]);
                }
                CHECK(log_likelihood(p, data) == doctest::Approx(base).epsilon(1e-13));
            }
        }
        SUBCASE("precinct order") {
            auto shuffled = data;
            std::reverse(shuffled.begin(), shuffled.end());
            std::rotate(shuffled.begin(), shuffled.begin() + 7, shuffled.end());
            CHECK(log_likelihood(params, shuffled) == doctest::Approx(base).epsilon(1e-13));
        }
        SUBCASE("duplicate cluster with split weight") {
            for (int k = 0; k < 3; ++k) {
                MixtureParams p = params;
                p.theta[k] *= 0.5;
                p.theta.push_back(p.theta[k]);
                p.eta.push_back(p.eta[k]);
                CHECK(std::abs(log_likelihood(p, data) - base) < 1e-10);
            }
        }
    }
}

TEST_CASE("Monte Carlo voter oracle") {
    SUBCASE("single voter") {
        Rng rng(1);
        const MixtureParams p{{1.0}, {{Family::Normal, 0, 1}}};
        const double est = mc_oracle_likelihood(p, {"x", -1, 1, 1, 0}, 100000, rng);
        CHECK(std::abs(est - 0.5) < 3.0 * std::sqrt(0.25 / 100000));
    }
    SUBCASE("four voters, three for candidate 0") {
        Rng rng(2);
        const MixtureParams p{{1.0}, {{Family::Normal, 0, 1}}};
        const PrecinctObs obs{"x", -1, 1, 3, 1};
        const double exact = std::exp(precinct_log_marginal(p, obs) + log_binomial(4, 3));
        CHECK(exact == doctest::Approx(0.25).epsilon(1e-14));
        const double est = mc_oracle_likelihood(p, obs, 100000, rng);
        CHECK(std::abs(est - exact) < 3.0 * std::sqrt(exact * (1 - exact) / 100000));
    }
    SUBCASE("random small instances") {
        Rng rng(3);
        for (int trial = 0; trial < 6; ++trial) {
            const Family f = static_cast<Family>(trial % 3);
            const auto params = random_params(rng, 1 + trial % 3, f);
            const auto n = static_cast<std::int64_t>(1 + rng.below(20));
            const auto n0 = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n) + 1));
            const PrecinctObs obs{"x", rng.normal(-1, 0.5), rng.normal(1, 0.5), n0, n - n0};
            const double exact = std::exp(precinct_log_marginal(params, obs) + log_binomial(n, n0));
            const std::int64_t reps = 20000;
            const double est = mc_oracle_likelihood(params, obs, reps, rng);
            CAPTURE(trial);
            CHECK(std::abs(est - exact) <= 3.0 * std::sqrt(exact * (1 - exact) / reps) + 1e-12);
        }
    }
}

TEST_CASE("vote rule ties go to candidate 1") {
    CHECK(votes_for_candidate0(-0.5, -1, 1));
    CHECK_FALSE(votes_for_candidate0(0.0, -1, 1));
    CHECK_FALSE(votes_for_candidate0(0.5, -1, 1));
    CHECK(votes_for_candidate0(0.5, 1, -1));
}

TEST_CASE("log binomial") {
    CHECK(std::exp(log_binomial(4, 3)) == doctest::Approx(4.0));
    CHECK(std::exp(log_binomial(20, 10)) == doctest::Approx(prefinfer::testing::binomial_coefficient(20, 10)));
    CHECK(log_binomial(7, 0) == 0.0);
}

TEST_CASE("log sum exp") {
    const std::vector<double> v{-1000.0, -1000.0};
    CHECK(log_sum_exp(v) == doctest::Approx(-1000.0 + std::log(2.0)).epsilon(1e-15));
    const std::vector<double> inf{-INFINITY, -INFINITY};
    CHECK(log_sum_exp(inf) == -INFINITY);
}
