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

// Pipeline subcommands. Output layout under --out:
//   data/          simulate: CSV/GeoJSON inputs and truth.json
//   fit/           fit_<STATE>_<CYCLE>.json, fit.log, ingest_report.json
//   aggregate/     district/decade means, distributions, density and histogram CSVs
//   polarization/  polarization.csv, polarization.json
//   predictions/   report_<STATE>.csv, summary_<STATE>.csv
//   validation/    validation.json, pairs.csv

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "prefinfer/components.hpp"

namespace prefinfer::cli {

struct RunConfig {
    std::string subcommand;
    std::filesystem::path elections;
    std::filesystem::path candidates;
    std::filesystem::path centers;
    std::filesystem::path districts;
    std::filesystem::path survey;
    std::filesystem::path mrp;
    std::filesystem::path out = "out";
    int k = 4;
    Family family = Family::Normal;
    int chains = 4;
    std::int64_t iterations = 50000;
    double step_size = 0.1;
    std::uint64_t seed = 0;

    // simulate
    std::string scenario = "standard";
    int precincts = 200;
    std::int64_t voters = 1000;
    int district_count = 10;
    int cycles = 1;
    double shift = 0.5;
    bool senate = false;
};

void cmd_fit(const RunConfig& config, std::ostream& log);
void cmd_aggregate(const RunConfig& config, std::ostream& log);
void cmd_polarize(const RunConfig& config, std::ostream& log);
void cmd_predict(const RunConfig& config, std::ostream& log);
void cmd_simulate(const RunConfig& config, std::ostream& log);
void cmd_validate(const RunConfig& config, std::ostream& log);

/// Parses arguments and dispatches. Returns 0 on success, 1 on runtime
/// failure, 2 on usage errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace prefinfer::cli
