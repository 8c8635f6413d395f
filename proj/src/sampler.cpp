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
#include "prefinfer/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "prefinfer/error.hpp"

namespace prefinfer {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log theta from additive log-ratio coordinates (theta_K is the reference).
void log_theta_from_ratios(std::span<const double> ratios, std::vector<double>& out) {
    const std::size_t k = ratios.size() + 1;
    out.resize(k);
    double hi = 0.0;
    for (double r : ratios) hi = std::max(hi, r);
    double acc = std::exp(-hi);
    for (double r : ratios) acc += std::exp(r - hi);
    const double norm = hi + std::log(acc);
    for (std::size_t j = 0; j + 1 < k; ++j) out[j] = ratios[j] - norm;
    out[k - 1] = -norm;
}

double sum(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

// Caches the precinct x cluster log terms so a component update touches one
// column and a simplex update touches none.
class ChainEvaluator {
public:
    ChainEvaluator(std::span<const PrecinctObs> data, int k, Family family)
        : data_(data), k_(k), family_(family), terms_(data.size() * static_cast<std::size_t>(k)),
          column_(data.size()) {
        if (data.empty()) throw Error(ErrorCode::EmptyDataset, "cannot sample without precincts");
    }

    // Full recomputation; returns the log-posterior.
    double load(const std::vector<double>& coords) {
        coords_ = coords;
        log_theta_from_ratios(std::span(coords_).first(static_cast<std::size_t>(k_ - 1)), log_theta_);
        theta_jac_ = k_ > 1 ? sum(log_theta_) : 0.0;
        comp_prior_.assign(static_cast<std::size_t>(k_), 0.0);
        comp_jac_.assign(static_cast<std::size_t>(k_), 0.0);
        for (int c = 0; c < k_; ++c) {
            const auto u = component(c, coords_);
            comp_prior_[c] = log_prior(u.params);
            comp_jac_[c] = u.log_jacobian;
            if (std::isfinite(comp_prior_[c])) {
                for (std::size_t i = 0; i < data_.size(); ++i) {
                    terms_[i * k_ + c] = precinct_component_log_term(data_[i], u.params);
                }
            }
        }
        loglik_ = total_loglik(log_theta_, -1, {});
        return log_posterior();
    }

    [[nodiscard]] double log_posterior() const {
        return loglik_ + log_dirichlet_one(k_) + sum(comp_prior_);
    }
    [[nodiscard]] double log_jacobian() const { return theta_jac_ + sum(comp_jac_); }
    [[nodiscard]] const std::vector<double>& coords() const { return coords_; }

    // Returns true on acceptance.
    bool step(int block, double step_size, Rng& rng) {
        if (block == 0) return step_theta(step_size, rng);
        return step_component(block - 1, step_size, rng);
    }

private:
    Unconstrained component(int c, const std::vector<double>& coords) const {
        const std::size_t base = static_cast<std::size_t>(k_ - 1) + 2 * static_cast<std::size_t>(c);
        return from_unconstrained(family_, {coords[base], coords[base + 1]});
    }

    // Sum over precincts of logsumexp_k; optionally with column `swap_k` replaced.
    double total_loglik(const std::vector<double>& log_theta, int swap_k, std::span<const double> swap_col) const {
        double total = 0.0;
        for (std::size_t i = 0; i < data_.size(); ++i) {
            const double* row = &terms_[i * k_];
            double hi = kNegInf;
            for (int c = 0; c < k_; ++c) {
                const double t = log_theta[c] + (c == swap_k ? swap_col[i] : row[c]);
                hi = std::max(hi, t);
            }
            if (!std::isfinite(hi)) return kNegInf;
            double acc = 0.0;
            for (int c = 0; c < k_; ++c) {
                acc += std::exp(log_theta[c] + (c == swap_k ? swap_col[i] : row[c]) - hi);
            }
            total += hi + std::log(acc);
        }
        return total;
    }

    static bool accept(double log_alpha, Rng& rng) { return std::log(rng.uniform_open()) < log_alpha; }

    bool step_theta(double step_size, Rng& rng) {
        if (k_ == 1) return false;
        std::vector<double> proposal(coords_.begin(), coords_.begin() + (k_ - 1));
        for (double& u : proposal) u += step_size * rng.normal();
        log_theta_from_ratios(proposal, scratch_theta_);
        const double loglik = total_loglik(scratch_theta_, -1, {});
        const double jac = sum(scratch_theta_);
        const double log_alpha = (loglik - loglik_) + (jac - theta_jac_);
        if (!accept(log_alpha, rng)) return false;
        std::copy(proposal.begin(), proposal.end(), coords_.begin());
        log_theta_.swap(scratch_theta_);
        loglik_ = loglik;
        theta_jac_ = jac;
        return true;
    }

    bool step_component(int c, double step_size, Rng& rng) {
        const std::size_t base = static_cast<std::size_t>(k_ - 1) + 2 * static_cast<std::size_t>(c);
        const std::array<double, 2> proposal = {coords_[base] + step_size * rng.normal(),
                                                coords_[base + 1] + step_size * rng.normal()};
        const auto u = from_unconstrained(family_, proposal);
        const double prior = log_prior(u.params);
        if (!std::isfinite(prior)) return false;
        for (std::size_t i = 0; i < data_.size(); ++i) {
            column_[i] = precinct_component_log_term(data_[i], u.params);
        }
        const double loglik = total_loglik(log_theta_, c, column_);
        const double log_alpha =
            (loglik - loglik_) + (prior - comp_prior_[c]) + (u.log_jacobian - comp_jac_[c]);
        if (!accept(log_alpha, rng)) return false;
        coords_[base] = proposal[0];
        coords_[base + 1] = proposal[1];
        for (std::size_t i = 0; i < data_.size(); ++i) terms_[i * k_ + c] = column_[i];
        loglik_ = loglik;
        comp_prior_[c] = prior;
        comp_jac_[c] = u.log_jacobian;
        return true;
    }

    std::span<const PrecinctObs> data_;
    int k_;
    Family family_;
    std::vector<double> coords_;
    std::vector<double> log_theta_;
    std::vector<double> scratch_theta_;
    std::vector<double> terms_;
    std::vector<double> column_;
    std::vector<double> comp_prior_;
    std::vector<double> comp_jac_;
    double theta_jac_ = 0.0;
    double loglik_ = 0.0;
};

ChainState fresh_state(const ChainEvaluator& eval, double log_posterior, int k) {
    ChainState s;
    s.coords = eval.coords();
    s.log_posterior = log_posterior;
    s.log_jacobian = eval.log_jacobian();
    s.accepts.assign(static_cast<std::size_t>(block_count(k)), 0);
    s.proposals.assign(static_cast<std::size_t>(block_count(k)), 0);
    return s;
}

void record_step(ChainState& state, const ChainEvaluator& eval, int block, bool accepted, int k) {
    if (block > 0 || k > 1) ++state.proposals[block];
    if (accepted) {
        ++state.accepts[block];
        state.coords = eval.coords();
        state.log_posterior = eval.log_posterior();
        state.log_jacobian = eval.log_jacobian();
    }
}

}  // namespace

void ChainConfig::validate() const {
    if (iterations < 1) throw Error(ErrorCode::InvalidConfig, "iterations must be >= 1");
    if (chains < 1) throw Error(ErrorCode::InvalidConfig, "chains must be >= 1");
    if (k < 1) throw Error(ErrorCode::InvalidConfig, "K must be >= 1");
    if (!(step_size > 0.0) || !std::isfinite(step_size)) {
        throw Error(ErrorCode::InvalidConfig, "step size must be positive and finite");
    }
}

MixtureParams params_from_coords(std::span<const double> coords, int k, Family family) {
    MixtureParams params;
    std::vector<double> log_theta;
    log_theta_from_ratios(coords.first(static_cast<std::size_t>(k - 1)), log_theta);
    params.theta.resize(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) params.theta[c] = std::exp(log_theta[c]);
    for (int c = 0; c < k; ++c) {
        const std::size_t base = static_cast<std::size_t>(k - 1) + 2 * static_cast<std::size_t>(c);
        params.eta.push_back(from_unconstrained(family, {coords[base], coords[base + 1]}).params);
    }
    return params;
}

std::vector<double> coords_from_params(const MixtureParams& params) {
    const int k = params.k();
    std::vector<double> coords;
    coords.reserve(static_cast<std::size_t>(3 * k - 1));
    const double ref = std::log(params.theta[k - 1]);
    for (int c = 0; c + 1 < k; ++c) coords.push_back(std::log(params.theta[c]) - ref);
    for (const auto& comp : params.eta) {
        const auto u = to_unconstrained(comp);
        coords.push_back(u[0]);
        coords.push_back(u[1]);
    }
    return coords;
}

double coords_log_jacobian(const MixtureParams& params) {
    double jac = 0.0;
    if (params.k() > 1) {
        for (double t : params.theta) jac += std::log(t);
    }
    for (const auto& comp : params.eta) {
        if (comp.family != Family::Uniform) jac += std::log(comp.b);
    }
    return jac;
}

ChainState init_state(const ChainConfig& config, std::span<const PrecinctObs> data, Rng& rng) {
    config.validate();
    ChainEvaluator eval(data, config.k, config.family);
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<double> coords;
        std::vector<double> weights(static_cast<std::size_t>(config.k));
        for (double& w : weights) w = rng.exponential();
        for (int c = 0; c + 1 < config.k; ++c) coords.push_back(std::log(weights[c]) - std::log(weights.back()));
        for (int c = 0; c < config.k; ++c) {
            const double a = rng.normal(0.0, 10.0);
            const double b = config.family == Family::Uniform ? std::abs(rng.normal(0.0, 10.0))
                                                              : 1.0 / rng.exponential();
            const auto u = to_unconstrained(ComponentParams{config.family, a, b});
            coords.push_back(u[0]);
            coords.push_back(u[1]);
        }
        const double lp = eval.load(coords);
        if (std::isfinite(lp) && std::isfinite(eval.log_jacobian())) return fresh_state(eval, lp, config.k);
    }
    throw Error(ErrorCode::NonFiniteInit, "no finite log-posterior after 100 initial draws");
}

ChainState mh_step(const ChainConfig& config, const ChainState& state,
                   std::span<const PrecinctObs> data, int block, Rng& rng) {
    if (block < 0 || block >= block_count(config.k)) {
        throw Error(ErrorCode::InvalidConfig, "block index out of range");
    }
    ChainEvaluator eval(data, config.k, config.family);
    eval.load(state.coords);
    ChainState next = state;
    const bool accepted = eval.step(block, config.step_size, rng);
    record_step(next, eval, block, accepted, config.k);
    return next;
}

ChainRun run_chain(const ChainConfig& config, std::span<const PrecinctObs> data, int chain_index) {
    return run_chain(config, data, chain_index, {});
}

ChainRun run_chain(const ChainConfig& config, std::span<const PrecinctObs> data, int chain_index,
                   const SweepObserver& observer) {
    config.validate();
    const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(chain_index);
    Rng rng(seed);
    ChainState state = init_state(config, data, rng);
    ChainEvaluator eval(data, config.k, config.family);
    eval.load(state.coords);

    ChainState best = state;
    const int blocks = block_count(config.k);
    for (std::int64_t it = 0; it < config.iterations; ++it) {
        for (int block = 0; block < blocks; ++block) {
            const bool accepted = eval.step(block, config.step_size, rng);
            record_step(state, eval, block, accepted, config.k);
            if (accepted && state.log_posterior > best.log_posterior) {
                best.coords = state.coords;
                best.log_posterior = state.log_posterior;
                best.log_jacobian = state.log_jacobian;
                best.iteration = it + 1;
            }
        }
        ++state.iteration;
        if (observer) observer(state);
    }
    best.accepts = state.accepts;
    best.proposals = state.proposals;

    ChainRun run;
    run.summary.seed = seed;
    run.summary.best_log_posterior = best.log_posterior;
    for (int block = 0; block < blocks; ++block) {
        run.summary.accept_rates.push_back(
            state.proposals[block] > 0
                ? static_cast<double>(state.accepts[block]) / static_cast<double>(state.proposals[block])
                : 0.0);
    }
    run.best = std::move(best);
    run.last = std::move(state);
    return run;
}

unsigned resolve_threads(unsigned requested) {
    unsigned n = requested > 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("PREF_INFER_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap > 0) n = std::min(n, static_cast<unsigned>(cap));
    }
    return n;
}

FitResult fit(const ChainConfig& config, std::span<const PrecinctObs> data) {
    config.validate();
    if (data.empty()) throw Error(ErrorCode::EmptyDataset, "cannot fit an empty dataset");

    std::vector<ChainRun> runs(static_cast<std::size_t>(config.chains));
    const unsigned workers = std::min<unsigned>(resolve_threads(config.threads), static_cast<unsigned>(config.chains));
    if (workers <= 1) {
        for (int c = 0; c < config.chains; ++c) runs[c] = run_chain(config, data, c);
    } else {
        std::atomic<int> next{0};
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(config.chains));
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int c = next++; c < config.chains; c = next++) {
                    try {
                        runs[c] = run_chain(config, data, c);
                    } catch (...) {
                        errors[c] = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        for (const auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    std::size_t best = 0;
    for (std::size_t c = 1; c < runs.size(); ++c) {
        if (runs[c].best.log_posterior > runs[best].best.log_posterior) best = c;
    }
    FitResult result;
    result.map_params = params_from_coords(runs[best].best.coords, config.k, config.family);
    result.map_log_posterior = runs[best].best.log_posterior;
    for (const auto& run : runs) result.chains.push_back(run.summary);
    result.assignments = map_assignments(result.map_params, data);
    return result;
}

int FitResult::cluster_of(const std::string& precinct_id) const {
    const auto it = assignments.find(precinct_id);
    if (it == assignments.end()) {
        throw Error(ErrorCode::UnassignedPrecinct, "precinct '" + precinct_id + "' has no cluster assignment");
    }
    return it->second;
}

int map_assignment(const MixtureParams& params, const PrecinctObs& precinct) {
    int best = 0;
    double best_term = kNegInf;
    for (int c = 0; c < params.k(); ++c) {
        const double term = std::log(params.theta[c]) + precinct_component_log_term(precinct, params.eta[c]);
        if (term > best_term) {
            best_term = term;
            best = c;
        }
    }
    return best;
}

std::map<std::string, int> map_assignments(const MixtureParams& params, std::span<const PrecinctObs> data) {
    std::map<std::string, int> out;
    for (const auto& p : data) out[p.precinct_id] = map_assignment(params, p);
    return out;
}

}  // namespace prefinfer
