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
#include "prefinfer/io.hpp"

#include <fstream>
#include <sstream>

#include "prefinfer/error.hpp"

namespace prefinfer {

namespace {

nlohmann::json eta_to_json(const std::vector<ComponentParams>& eta) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& c : eta) out.push_back({{"a", c.a}, {"b", c.b}});
    return out;
}

nlohmann::json triple_to_json(const MetricTriple& t) {
    return {{"difference_of_means", t.diff_of_means}, {"std_dev", t.std_dev}, {"excess_kurtosis", t.excess_kurtosis}};
}

std::string cycle_label(const CycleRange& c) {
    return c.first == c.last ? std::to_string(c.first) : std::to_string(c.first) + "-" + std::to_string(c.last);
}

}  // namespace

nlohmann::json fit_to_json(const FitResult& fit) {
    nlohmann::json chains = nlohmann::json::array();
    for (const auto& c : fit.chains) {
        chains.push_back({{"seed", c.seed}, {"best_lp", c.best_log_posterior}, {"accept_rates", c.accept_rates}});
    }
    return {{"family", std::string(to_string(fit.family()))},
            {"K", fit.k()},
            {"theta", fit.map_params.theta},
            {"eta", eta_to_json(fit.map_params.eta)},
            {"log_posterior", fit.map_log_posterior},
            {"assignments", fit.assignments},
            {"chains", std::move(chains)}};
}

FitResult fit_from_json(const nlohmann::json& doc) {
    try {
        FitResult fit;
        const Family family = parse_family(doc.at("family").get<std::string>());
        const int k = doc.at("K").get<int>();
        fit.map_params.theta = doc.at("theta").get<std::vector<double>>();
        for (const auto& e : doc.at("eta")) {
            fit.map_params.eta.push_back(ComponentParams{family, e.at("a").get<double>(), e.at("b").get<double>()});
        }
        if (fit.map_params.k() != k) throw Error(ErrorCode::InvalidParams, "K does not match eta length");
        fit.map_params.validate();
        fit.map_log_posterior = doc.at("log_posterior").get<double>();
        fit.assignments = doc.at("assignments").get<std::map<std::string, int>>();
        for (const auto& [id, c] : fit.assignments) {
            if (c < 0 || c >= k) throw Error(ErrorCode::InvalidParams, "assignment out of range for " + id);
        }
        for (const auto& c : doc.at("chains")) {
            fit.chains.push_back({c.at("seed").get<std::uint64_t>(), c.at("best_lp").get<double>(),
                                  c.at("accept_rates").get<std::vector<double>>()});
        }
        return fit;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::IoError, std::string("malformed fit JSON: ") + e.what());
    }
}

nlohmann::json distribution_to_json(const AggregateDistribution& dist) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& wc : dist.components) {
        comps.push_back({{"weight", wc.weight},
                         {"family", std::string(to_string(wc.params.family))},
                         {"a", wc.params.a},
                         {"b", wc.params.b}});
    }
    return {{"scope", dist.scope == ScopeKind::State ? "state" : "district"},
            {"population", dist.population},
            {"components", std::move(comps)}};
}

nlohmann::json polarization_to_json(const PolarizationReport& report) {
    return {{"voters", triple_to_json(report.voters)},
            {"candidates", triple_to_json(report.candidates)},
            {"difference", triple_to_json(report.difference)}};
}

nlohmann::json truth_to_json(const SyntheticSpec& spec, const SyntheticData& data) {
    nlohmann::json assignments = nlohmann::json::object();
    for (int i = 0; i < spec.precincts; ++i) assignments[synthetic_precinct_id(i)] = data.assignments[i];
    nlohmann::json doc = {{"family", std::string(to_string(spec.planted.family()))},
                          {"K", spec.planted.k()},
                          {"theta", spec.planted.theta},
                          {"eta", eta_to_json(spec.planted.eta)},
                          {"seed", spec.seed},
                          {"assignments", std::move(assignments)}};
    if (spec.bimodal) {
        doc["bimodal"] = {{"left", {{"a", spec.bimodal->left.a}, {"b", spec.bimodal->left.b}}},
                          {"right", {{"a", spec.bimodal->right.a}, {"b", spec.bimodal->right.b}}},
                          {"left_weight", spec.bimodal->left_weight}};
    }
    return doc;
}

std::string district_estimates_csv(std::span<const DistrictEstimate> estimates) {
    std::ostringstream out;
    out << "district,cycle,mean,population\n";
    for (const auto& e : estimates) {
        out << e.district << ',' << cycle_label(e.cycles) << ',' << format_double(e.mean) << ',' << e.population
            << '\n';
    }
    return out.str();
}

std::string prediction_rows_csv(std::span<const PredictionReport> reports) {
    std::ostringstream out;
    out << "task,method,district,predicted,actual\n";
    for (const auto& r : reports) {
        for (const auto& row : r.rows) {
            out << to_string(r.task) << ',' << r.method << ',' << row.district << ',' << format_double(row.predicted)
                << ',' << format_double(row.actual) << '\n';
        }
    }
    return out.str();
}

std::string prediction_summary_csv(std::span<const PredictionReport> reports) {
    std::ostringstream out;
    out << "task,method,mse,sem\n";
    for (const auto& r : reports) {
        out << to_string(r.task) << ',' << r.method << ',' << format_double(r.mse) << ',' << format_double(r.sem)
            << '\n';
    }
    return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::MissingArtifact, "expected file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json read_json(const std::filesystem::path& path) {
    const std::string text = read_text(path);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::IoError, path.string() + ": " + e.what());
    }
}

}  // namespace prefinfer
