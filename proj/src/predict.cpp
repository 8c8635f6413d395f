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
#include "prefinfer/predict.hpp"

#include <algorithm>
#include <cmath>

#include "prefinfer/error.hpp"
#include "prefinfer/model.hpp"

namespace prefinfer {

std::string_view to_string(PredictionTask task) {
    return task == PredictionTask::NextCycle ? "next_cycle" : "same_year";
}

std::vector<TargetPrecinct> build_targets(std::span<const ElectionRecord> target_elections,
                                          const CandidateIndex& candidates) {
    std::vector<TargetPrecinct> out;
    for (const auto& e : target_elections) {
        if (!e.district) continue;
        const auto& c0 = candidates.at(e.cand0_id, e.cycle, e.office);
        const auto& c1 = candidates.at(e.cand1_id, e.cycle, e.office);
        out.push_back({e.precinct_id, *e.district, e.total(), c0.cfscore, c1.cfscore});
    }
    return out;
}

double predict_precinct_share(const FitResult& fit, const std::string& precinct_id, double target_c0,
                              double target_c1) {
    const int cluster = fit.cluster_of(precinct_id);
    if (target_c0 == target_c1) return 0.5;
    const auto& component = fit.map_params.eta[cluster];
    const double m = 0.5 * (target_c0 + target_c1);
    return target_c0 < target_c1 ? cdf(component, m) : ccdf(component, m);
}

double predict_district_share(const FitResult& fit, std::span<const TargetPrecinct> targets, int district) {
    double weighted = 0.0;
    std::int64_t ballots = 0;
    for (const auto& t : targets) {
        if (t.district != district) continue;
        weighted += static_cast<double>(t.ballots) * predict_precinct_share(fit, t.precinct_id, t.c0, t.c1);
        ballots += t.ballots;
    }
    if (ballots == 0) {
        throw Error(ErrorCode::EmptyDistrict, "no target precincts in district " + std::to_string(district));
    }
    return std::clamp(weighted / static_cast<double>(ballots), 0.0, 1.0);
}

std::map<int, double> observed_district_shares(std::span<const ElectionRecord> elections) {
    std::map<int, std::pair<std::int64_t, std::int64_t>> counts;
    for (const auto& e : elections) {
        if (!e.district) continue;
        auto& c = counts[*e.district];
        c.first += e.n0;
        c.second += e.total();
    }
    std::map<int, double> out;
    for (const auto& [d, c] : counts) {
        if (c.second > 0) out[d] = static_cast<double>(c.first) / static_cast<double>(c.second);
    }
    return out;
}

double baseline_previous_share(double comparison_share) { return std::clamp(comparison_share, 0.0, 1.0); }

double baseline_survey_proxy(std::int64_t n_dem, std::int64_t n_rep, std::int64_t n_other) {
    const std::int64_t total = n_dem + n_rep + n_other;
    if (total < 1) throw Error(ErrorCode::EmptySurvey, "survey has no responses");
    return (static_cast<double>(n_dem) + 0.5 * static_cast<double>(n_other)) / static_cast<double>(total);
}

std::map<int, double> baseline_mrp_crossval(const std::map<int, double>& mrp_scores,
                                            const std::map<int, double>& actual_shares) {
    std::vector<int> districts;
    for (const auto& [d, s] : actual_shares) {
        if (!mrp_scores.contains(d)) {
            throw Error(ErrorCode::LengthMismatch, "district " + std::to_string(d) + " has no MRP score");
        }
        districts.push_back(d);
    }
    if (districts.size() < 3) throw Error(ErrorCode::DegenerateFold, "MRP cross-validation needs >= 3 districts");

    std::map<int, double> out;
    for (int held : districts) {
        double n = 0.0, sx = 0.0, sy = 0.0;
        for (int d : districts) {
            if (d == held) continue;
            n += 1.0;
            sx += mrp_scores.at(d);
            sy += actual_shares.at(d);
        }
        const double mx = sx / n;
        const double my = sy / n;
        double sxx = 0.0, sxy = 0.0;
        for (int d : districts) {
            if (d == held) continue;
            const double dx = mrp_scores.at(d) - mx;
            sxx += dx * dx;
            sxy += dx * (actual_shares.at(d) - my);
        }
        if (!(sxx > 0.0)) {
            throw Error(ErrorCode::DegenerateFold,
                        "MRP scores have zero variance when district " + std::to_string(held) + " is held out");
        }
        const double slope = sxy / sxx;
        out[held] = std::clamp(my + slope * (mrp_scores.at(held) - mx), 0.0, 1.0);
    }
    return out;
}

ErrorSummary evaluate(const std::map<int, double>& predictions, const std::map<int, double>& actuals) {
    if (predictions.size() != actuals.size()) {
        throw Error(ErrorCode::LengthMismatch, "predictions cover " + std::to_string(predictions.size()) +
                                                   " districts but actuals cover " + std::to_string(actuals.size()));
    }
    std::vector<double> sq;
    for (const auto& [d, p] : predictions) {
        const auto it = actuals.find(d);
        if (it == actuals.end()) {
            throw Error(ErrorCode::LengthMismatch, "no actual share for district " + std::to_string(d));
        }
        sq.push_back((p - it->second) * (p - it->second));
    }
    if (sq.size() < 2) throw Error(ErrorCode::LengthMismatch, "evaluation needs at least 2 districts");
    const double n = static_cast<double>(sq.size());
    ErrorSummary s;
    for (double e : sq) s.mse += e;
    s.mse /= n;
    double ss = 0.0;
    for (double e : sq) ss += (e - s.mse) * (e - s.mse);
    s.sem = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    return s;
}

PredictionReport make_report(PredictionTask task, std::string method, const std::map<int, double>& predictions,
                             const std::map<int, double>& actuals) {
    const auto summary = evaluate(predictions, actuals);
    PredictionReport report{task, std::move(method), {}, summary.mse, summary.sem};
    for (const auto& [d, p] : predictions) report.rows.push_back({d, p, actuals.at(d)});
    return report;
}

}  // namespace prefinfer
