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

// JSON and CSV forms of fit results and reports.

#include <filesystem>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "prefinfer/aggregate.hpp"
#include "prefinfer/polarization.hpp"
#include "prefinfer/predict.hpp"
#include "prefinfer/sampler.hpp"
#include "prefinfer/synthetic.hpp"

namespace prefinfer {

/// `{family, K, theta[], eta[{a,b}], log_posterior, assignments{id: k}, chains[{seed, best_lp, accept_rates}]}`
nlohmann::json fit_to_json(const FitResult& fit);
FitResult fit_from_json(const nlohmann::json& doc);

nlohmann::json distribution_to_json(const AggregateDistribution& dist);
nlohmann::json polarization_to_json(const PolarizationReport& report);
nlohmann::json truth_to_json(const SyntheticSpec& spec, const SyntheticData& data);

/// `district,cycle,mean,population`; the cycle column reads `2006-2010` for ranges.
std::string district_estimates_csv(std::span<const DistrictEstimate> estimates);

/// `task,method,district,predicted,actual`
std::string prediction_rows_csv(std::span<const PredictionReport> reports);
/// `task,method,mse,sem`
std::string prediction_summary_csv(std::span<const PredictionReport> reports);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace prefinfer
