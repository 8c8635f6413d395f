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

#include <array>
#include <string>
#include <string_view>

#include "prefinfer/rng.hpp"

namespace prefinfer {

enum class Family { Normal, Laplace, Uniform };

std::string_view to_string(Family family);
/// Case-insensitive; throws Error(InvalidParams) on anything else.
Family parse_family(std::string_view name);

/// One cluster's voter preference distribution.
///
/// `a` is the Normal mean, Laplace location or Uniform minimum; `b` is the
/// Normal standard deviation, Laplace scale or Uniform width (max - min).
struct ComponentParams {
    Family family = Family::Normal;
    double a = 0.0;
    double b = 1.0;

    /// Validated constructor: a finite, b finite and > 0.
    static ComponentParams make(Family family, double a, double b);

    bool operator==(const ComponentParams&) const = default;
};

double pdf(const ComponentParams& p, double x);
double cdf(const ComponentParams& p, double x);
/// 1 - cdf(p, x), computed without cancellation in the upper tail.
double ccdf(const ComponentParams& p, double x);
double mean(const ComponentParams& p);
/// E[(Y - mean)^z] for z in 0..4; Error(UnsupportedMoment) otherwise.
double central_moment(const ComponentParams& p, int z);

/// Normal(0, 100) on the location for every family. Scale gets
/// InverseGamma(shape 1, scale 1) for Normal and Laplace; the Uniform width
/// gets Normal(0, 100) truncated to positive values (-inf at b <= 0).
double log_prior(const ComponentParams& p);

double sample(const ComponentParams& p, Rng& rng);

/// Random-walk coordinates: (a, log b) for Normal/Laplace, (a, b) for Uniform.
std::array<double, 2> to_unconstrained(const ComponentParams& p);

struct Unconstrained {
    ComponentParams params;
    double log_jacobian = 0.0;
};

/// Inverse of to_unconstrained. For Uniform the returned width may be <= 0;
/// log_prior maps such values to -inf so callers reject them.
Unconstrained from_unconstrained(Family family, const std::array<double, 2>& coords);

}  // namespace prefinfer
