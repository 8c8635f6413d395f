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
#include "prefinfer/components.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>

#include "prefinfer/error.hpp"

namespace prefinfer {

namespace {

constexpr double kPriorLocVariance = 100.0;

double log_normal_density(double x, double mu, double variance) {
    const double d = x - mu;
    return -0.5 * std::log(2.0 * std::numbers::pi * variance) - 0.5 * d * d / variance;
}

// InverseGamma(shape 1, scale 1): alpha*log(beta) - lgamma(alpha) - (alpha+1)*log(x) - beta/x.
double log_inv_gamma_1_1(double x) {
    if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
    return -2.0 * std::log(x) - 1.0 / x;
}

}  // namespace

std::string_view to_string(Family family) {
    switch (family) {
        case Family::Normal: return "normal";
        case Family::Laplace: return "laplace";
        case Family::Uniform: return "uniform";
    }
    return "normal";
}

Family parse_family(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "normal") return Family::Normal;
    if (lower == "laplace") return Family::Laplace;
    if (lower == "uniform") return Family::Uniform;
    throw Error(ErrorCode::InvalidParams, "unknown component family '" + std::string(name) + "'");
}

ComponentParams ComponentParams::make(Family family, double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(b > 0.0)) {
        throw Error(ErrorCode::InvalidParams,
                    "component parameters must satisfy finite a and b > 0 (got a=" +
                        std::to_string(a) + ", b=" + std::to_string(b) + ")");
    }
    return ComponentParams{family, a, b};
}

double pdf(const ComponentParams& p, double x) {
    switch (p.family) {
        case Family::Normal: {
            const double z = (x - p.a) / p.b;
            return std::exp(-0.5 * z * z) / (p.b * std::sqrt(2.0 * std::numbers::pi));
        }
        case Family::Laplace:
            return std::exp(-std::abs(x - p.a) / p.b) / (2.0 * p.b);
        case Family::Uniform:
            return (x >= p.a && x <= p.a + p.b) ? 1.0 / p.b : 0.0;
    }
    return 0.0;
}

double cdf(const ComponentParams& p, double x) {
    switch (p.family) {
        case Family::Normal:
            return 0.5 * std::erfc(-(x - p.a) / (p.b * std::numbers::sqrt2));
        case Family::Laplace:
            if (x < p.a) return 0.5 * std::exp((x - p.a) / p.b);
            return 1.0 - 0.5 * std::exp(-(x - p.a) / p.b);
        case Family::Uniform:
            return std::clamp((x - p.a) / p.b, 0.0, 1.0);
    }
    return 0.0;
}

double ccdf(const ComponentParams& p, double x) {
    switch (p.family) {
        case Family::Normal:
            return 0.5 * std::erfc((x - p.a) / (p.b * std::numbers::sqrt2));
        case Family::Laplace:
            if (x < p.a) return 1.0 - 0.5 * std::exp((x - p.a) / p.b);
            return 0.5 * std::exp(-(x - p.a) / p.b);
        case Family::Uniform:
            return std::clamp((p.a + p.b - x) / p.b, 0.0, 1.0);
    }
    return 0.0;
}

double mean(const ComponentParams& p) {
    return p.family == Family::Uniform ? p.a + 0.5 * p.b : p.a;
}

double central_moment(const ComponentParams& p, int z) {
    if (z < 0 || z > 4) {
        throw Error(ErrorCode::UnsupportedMoment,
                    "central moments are available for z in 0..4, got " + std::to_string(z));
    }
    if (z == 0) return 1.0;
    if (z == 1 || z == 3) return 0.0;
    const double b2 = p.b * p.b;
    switch (p.family) {
        case Family::Normal: return z == 2 ? b2 : 3.0 * b2 * b2;
        case Family::Laplace: return z == 2 ? 2.0 * b2 : 24.0 * b2 * b2;
        case Family::Uniform: return z == 2 ? b2 / 12.0 : b2 * b2 / 80.0;
    }
    return 0.0;
}

double log_prior(const ComponentParams& p) {
    const double loc = log_normal_density(p.a, 0.0, kPriorLocVariance);
    switch (p.family) {
        case Family::Normal:
        case Family::Laplace:
            return loc + log_inv_gamma_1_1(p.b);
        case Family::Uniform:
            if (!(p.b > 0.0)) return -std::numeric_limits<double>::infinity();
            return loc + log_normal_density(p.b, 0.0, kPriorLocVariance);
    }
    return -std::numeric_limits<double>::infinity();
}

double sample(const ComponentParams& p, Rng& rng) {
    switch (p.family) {
        case Family::Normal:
            return rng.normal(p.a, p.b);
        case Family::Laplace: {
            // Difference of two unit exponentials is standard Laplace.
            const double e1 = rng.exponential();
            const double e2 = rng.exponential();
            return p.a + p.b * (e1 - e2);
        }
        case Family::Uniform:
            return p.a + p.b * rng.uniform();
    }
    return p.a;
}

std::array<double, 2> to_unconstrained(const ComponentParams& p) {
    if (p.family == Family::Uniform) return {p.a, p.b};
    return {p.a, std::log(p.b)};
}

Unconstrained from_unconstrained(Family family, const std::array<double, 2>& coords) {
    if (family == Family::Uniform) {
        return {ComponentParams{family, coords[0], coords[1]}, 0.0};
    }
    return {ComponentParams{family, coords[0], std::exp(coords[1])}, coords[1]};
}

}  // namespace prefinfer
