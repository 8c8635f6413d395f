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

// Democratic vote-share prediction for a target election from a fitted
// comparison election, plus the baselines it is judged against.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prefinfer/ingest.hpp"
#include "prefinfer/sampler.hpp"

namespace prefinfer {

enum class PredictionTask { NextCycle, SameYear };

std::string_view to_string(PredictionTask task);

/// One precinct of the target election.
struct TargetPrecinct {
    std::string precinct_id;
    int district = 0;
    std::int64_t ballots = 0;  // weight when aggregating to the district
    double c0 = 0.0;           // target Democrat
    double c1 = 0.0;
};

/// Throws Error(UnknownCandidate); precincts without a district are skipped.
std::vector<TargetPrecinct> build_targets(std::span<const ElectionRecord> target_elections,
                                          const CandidateIndex& candidates);

/// Phi of the precinct's assigned cluster at the target midpoint. Throws Error(UnassignedPrecinct).
double predict_precinct_share(const FitResult& fit, const std::string& precinct_id, double target_c0,
                              double target_c1);

/// Ballot-weighted mean of the precinct predictions. Throws Error(EmptyDistrict).
double predict_district_share(const FitResult& fit, std::span<const TargetPrecinct> targets, int district);

/// Observed Democratic share in each linked district.
std::map<int, double> observed_district_shares(std::span<const ElectionRecord> elections);

/// Identity on the comparison election's observed share.
double baseline_previous_share(double comparison_share);

/// (nD + nIO / 2) / (nD + nR + nIO). Throws Error(EmptySurvey).
double baseline_survey_proxy(std::int64_t n_dem, std::int64_t n_rep, std::int64_t n_other);

/// Leave-one-out OLS of share on MRP score, clamped to [0, 1].
/// Throws Error(DegenerateFold) or Error(LengthMismatch).
std::map<int, double> baseline_mrp_crossval(const std::map<int, double>& mrp_scores,
                                            const std::map<int, double>& actual_shares);

struct ErrorSummary {
    double mse = 0.0;
    double sem = 0.0;  // sample SD (n - 1) of squared errors over sqrt(n)
};

/// Throws Error(LengthMismatch) unless both maps cover the same >= 2 districts.
ErrorSummary evaluate(const std::map<int, double>& predictions, const std::map<int, double>& actuals);

struct PredictionRow {
    int district = 0;
    double predicted = 0.0;
    double actual = 0.0;
};

struct PredictionReport {
    PredictionTask task = PredictionTask::NextCycle;
    std::string method;
    std::vector<PredictionRow> rows;
    double mse = 0.0;
    double sem = 0.0;
};

PredictionReport make_report(PredictionTask task, std::string method, const std::map<int, double>& predictions,
                             const std::map<int, double>& actuals);

}  // namespace prefinfer
