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

// Block-wise random-walk Metropolis-Hastings over (theta, eta).
//
// The chain moves in unconstrained coordinates:
//   [u_1 .. u_{K-1}]           additive log-ratio of theta against theta_K
//   [a_k, s_k] for each k      s_k = log b_k (Normal, Laplace) or b_k (Uniform)
// Blocks are visited in the order theta, eta_1, ..., eta_K each sweep. The
// chain keeps the highest log-posterior state it has visited.

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "prefinfer/components.hpp"
#include "prefinfer/model.hpp"
#include "prefinfer/rng.hpp"

namespace prefinfer {

struct ChainConfig {
    std::int64_t iterations = 50000;
    double step_size = 0.1;
    int chains = 4;
    std::uint64_t seed = 0;
    int k = 4;
    Family family = Family::Normal;
    /// 0 = use PREF_INFER_THREADS, falling back to the hardware concurrency.
    unsigned threads = 0;

    /// Throws Error(InvalidConfig).
    void validate() const;
};

struct ChainState {
    std::vector<double> coords;
    double log_posterior = 0.0;
    double log_jacobian = 0.0;
    std::vector<std::int64_t> accepts;    // per block
    std::vector<std::int64_t> proposals;  // per block
    std::int64_t iteration = 0;
};

/// Number of blocks: the simplex block plus one per component.
inline int block_count(int k) { return k + 1; }

MixtureParams params_from_coords(std::span<const double> coords, int k, Family family);
std::vector<double> coords_from_params(const MixtureParams& params);

/// log|d(theta, eta)/d(coords)|.
double coords_log_jacobian(const MixtureParams& params);

/// Dirichlet(1) weights and prior-drawn component parameters; redraws up to
/// 100 times until the log-posterior is finite (Error(NonFiniteInit) otherwise).
ChainState init_state(const ChainConfig& config, std::span<const PrecinctObs> data, Rng& rng);

/// One Metropolis-Hastings update of a single block. Block 0 is the simplex
/// (a no-op when K = 1); block k >= 1 is component k - 1.
ChainState mh_step(const ChainConfig& config, const ChainState& state,
                   std::span<const PrecinctObs> data, int block, Rng& rng);

struct ChainSummary {
    std::uint64_t seed = 0;
    double best_log_posterior = 0.0;
    std::vector<double> accept_rates;  // per block
};

struct ChainRun {
    ChainState best;
    ChainState last;
    ChainSummary summary;
};

/// Runs config.iterations sweeps from a fresh state seeded with seed + chain_index.
ChainRun run_chain(const ChainConfig& config, std::span<const PrecinctObs> data, int chain_index);

/// Same chain; `observer` sees the current state after every sweep.
using SweepObserver = std::function<void(const ChainState&)>;
ChainRun run_chain(const ChainConfig& config, std::span<const PrecinctObs> data, int chain_index,
                   const SweepObserver& observer);

struct FitResult {
    MixtureParams map_params;
    double map_log_posterior = 0.0;
    std::map<std::string, int> assignments;  // precinct_id -> cluster
    std::vector<ChainSummary> chains;

    [[nodiscard]] Family family() const { return map_params.family(); }
    [[nodiscard]] int k() const { return map_params.k(); }
    /// Throws Error(UnassignedPrecinct).
    [[nodiscard]] int cluster_of(const std::string& precinct_id) const;
};

/// Independent chains (possibly in parallel), argmax over their best states,
/// then MAP cluster assignment of every precinct.
FitResult fit(const ChainConfig& config, std::span<const PrecinctObs> data);

/// argmax_k log theta_k + n0 log phi_k + n1 log(1 - phi_k); ties to the lowest k.
int map_assignment(const MixtureParams& params, const PrecinctObs& precinct);

std::map<std::string, int> map_assignments(const MixtureParams& params, std::span<const PrecinctObs> data);

/// Worker count: the explicit value or the hardware count, capped by PREF_INFER_THREADS when set.
unsigned resolve_threads(unsigned requested);

}  // namespace prefinfer
