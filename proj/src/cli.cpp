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
#include "prefinfer/cli.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "prefinfer/aggregate.hpp"
#include "prefinfer/error.hpp"
#include "prefinfer/ingest.hpp"
#include "prefinfer/io.hpp"
#include "prefinfer/model.hpp"
#include "prefinfer/polarization.hpp"
#include "prefinfer/predict.hpp"
#include "prefinfer/sampler.hpp"
#include "prefinfer/synthetic.hpp"

namespace prefinfer::cli {

namespace fs = std::filesystem;

namespace {

using GroupKey = std::pair<std::string, int>;  // (state, cycle)

struct Inputs {
    CandidateIndex candidates;
    std::vector<ElectionRecord> elections;
    std::int64_t skipped = 0;
    std::vector<std::string> unmatched;
    std::vector<std::string> warnings;
    bool linked = false;
};

void require_file(const fs::path& path, const std::string& flag) {
    if (path.empty()) throw Error(ErrorCode::MissingArtifact, flag + " is required");
    if (!fs::exists(path)) throw Error(ErrorCode::MissingArtifact, "expected file " + path.string() + " (" + flag + ")");
}

Inputs load_inputs(const RunConfig& config, bool need_link) {
    require_file(config.candidates, "--candidates");
    require_file(config.elections, "--elections");
    Inputs in;
    in.candidates = CandidateIndex(load_candidates(config.candidates));
    auto load = load_elections(config.elections, in.candidates);
    in.skipped = load.skipped;
    in.elections = std::move(load.records);
    const bool have_geo = !config.centers.empty() && !config.districts.empty();
    if (need_link && !have_geo) {
        throw Error(ErrorCode::MissingArtifact, "--centers and --districts are required for district-level output");
    }
    if (have_geo) {
        require_file(config.centers, "--centers");
        require_file(config.districts, "--districts");
        auto linked = link_districts(std::move(in.elections), load_centers(config.centers),
                                     load_boundaries(config.districts));
        in.elections = std::move(linked.elections);
        in.unmatched = std::move(linked.unmatched);
        in.warnings = std::move(linked.warnings);
        in.linked = true;
    }
    return in;
}

std::map<GroupKey, std::vector<ElectionRecord>> groups_of(const std::vector<ElectionRecord>& elections, Office office) {
    std::map<GroupKey, std::vector<ElectionRecord>> groups;
    for (const auto& e : elections) {
        if (e.office == office) groups[{e.state, e.cycle}].push_back(e);
    }
    return groups;
}

std::string group_tag(const GroupKey& key) { return key.first + "_" + std::to_string(key.second); }

fs::path fit_path(const RunConfig& config, const GroupKey& key) {
    return config.out / "fit" / ("fit_" + group_tag(key) + ".json");
}

FitResult load_fit(const RunConfig& config, const GroupKey& key) {
    const fs::path path = fit_path(config, key);
    if (!fs::exists(path)) throw Error(ErrorCode::MissingArtifact, "expected fit artifact " + path.string());
    return fit_from_json(read_json(path));
}

std::vector<ElectionRecord> linked_only(const std::vector<ElectionRecord>& group) {
    std::vector<ElectionRecord> out;
    for (const auto& e : group) {
        if (e.district) out.push_back(e);
    }
    return out;
}

std::vector<double> candidate_scores(const CandidateIndex& candidates, const std::vector<ElectionRecord>& group) {
    std::set<std::string> ids;
    for (const auto& e : group) {
        ids.insert(e.cand0_id);
        ids.insert(e.cand1_id);
    }
    std::vector<double> scores;
    const auto& first = group.front();
    for (const auto& id : ids) scores.push_back(candidates.at(id, first.cycle, first.office).cfscore);
    return scores;
}

std::string histogram_csv(const std::vector<double>& scores, int bins) {
    std::ostringstream out;
    out << "bin_lo,bin_hi,count\n";
    if (scores.empty()) return out.str();
    double lo = scores.front(), hi = scores.front();
    for (double s : scores) {
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    if (hi == lo) hi = lo + 1.0;
    std::vector<int> counts(static_cast<std::size_t>(bins), 0);
    for (double s : scores) {
        int b = static_cast<int>((s - lo) / (hi - lo) * bins);
        counts[std::min(b, bins - 1)]++;
    }
    for (int b = 0; b < bins; ++b) {
        out << format_double(lo + (hi - lo) * b / bins) << ',' << format_double(lo + (hi - lo) * (b + 1) / bins) << ','
            << counts[b] << '\n';
    }
    return out.str();
}

void write_ingest_report(const RunConfig& config, const Inputs& in, const std::string& stage) {
    write_text(config.out / stage / "ingest_report.json", skip_report_json(in.skipped, in.unmatched) + "\n");
}

}  // namespace

void cmd_fit(const RunConfig& config, std::ostream& log) {
    const Inputs in = load_inputs(config, false);
    const auto groups = groups_of(in.elections, Office::House);
    if (groups.empty()) throw Error(ErrorCode::EmptyDataset, "no House elections to fit");

    std::ostringstream fit_log;
    for (const auto& w : in.warnings) fit_log << "warning: " << w << '\n';
    fit_log << "skipped zero-vote rows: " << in.skipped << '\n';
    for (const auto& [key, group] : groups) {
        ChainConfig chain;
        chain.k = config.k;
        chain.family = config.family;
        chain.chains = config.chains;
        chain.iterations = config.iterations;
        chain.step_size = config.step_size;
        chain.seed = derive_seed(config.seed, "chains:" + group_tag(key));
        const auto obs = build_observations(group, in.candidates);
        const FitResult result = fit(chain, obs);
        write_text(fit_path(config, key), fit_to_json(result).dump(1) + "\n");

        fit_log << "group " << key.first << ' ' << key.second << ": precincts=" << obs.size() << " K=" << config.k
                << " family=" << to_string(config.family) << " chains=" << config.chains
                << " iterations=" << config.iterations << " step_size=" << format_double(config.step_size)
                << " map_log_posterior=" << format_double(result.map_log_posterior) << '\n';
        for (const auto& c : result.chains) {
            fit_log << "  chain seed=" << c.seed << " best_lp=" << format_double(c.best_log_posterior)
                    << " accept_rates=";
            for (std::size_t b = 0; b < c.accept_rates.size(); ++b) {
                fit_log << (b ? "," : "") << format_double(c.accept_rates[b]);
            }
            fit_log << '\n';
        }
        log << "fit " << group_tag(key) << " -> " << fit_path(config, key).string() << '\n';
    }
    write_text(config.out / "fit" / "fit.log", fit_log.str());
    write_ingest_report(config, in, "fit");
}

void cmd_aggregate(const RunConfig& config, std::ostream& log) {
    const Inputs in = load_inputs(config, true);
    const auto groups = groups_of(in.elections, Office::House);
    std::map<std::string, std::vector<DistrictEstimate>> per_state;
    std::map<std::string, std::map<int, std::vector<DistrictEstimate>>> per_district;
    for (const auto& [key, group] : groups) {
        const FitResult result = load_fit(config, key);
        const auto linked = linked_only(group);
        const auto means = district_means(result, linked);
        for (const auto& m : means) {
            per_state[key.first].push_back(m);
            per_district[key.first][m.district].push_back(m);
        }

        nlohmann::json doc = {{"state", key.first}, {"cycle", key.second}};
        const auto state_dist = scope_distribution(result, group, Scope::state());
        doc["distribution"] = distribution_to_json(state_dist);
        nlohmann::json districts = nlohmann::json::array();
        for (const auto& m : means) {
            auto d = distribution_to_json(scope_distribution(result, linked, Scope::of_district(m.district)));
            d["district"] = m.district;
            districts.push_back(std::move(d));
        }
        doc["districts"] = std::move(districts);
        const fs::path dir = config.out / "aggregate";
        write_text(dir / ("distributions_" + group_tag(key) + ".json"), doc.dump(1) + "\n");

        std::ostringstream density;
        density << "x,voter_density\n";
        for (const auto& [x, y] : density_grid(state_dist, 401)) {
            density << format_double(x) << ',' << format_double(y) << '\n';
        }
        write_text(dir / ("density_" + group_tag(key) + ".csv"), density.str());
        write_text(dir / ("candidate_hist_" + group_tag(key) + ".csv"),
                   histogram_csv(candidate_scores(in.candidates, group), 30));
        log << "aggregate " << group_tag(key) << ": " << means.size() << " districts\n";
    }
    for (const auto& [state, estimates] : per_state) {
        write_text(config.out / "aggregate" / ("district_means_" + state + ".csv"), district_estimates_csv(estimates));
        std::vector<DistrictEstimate> decade;
        for (const auto& [d, cycles] : per_district[state]) decade.push_back(decade_mean(cycles));
        write_text(config.out / "aggregate" / ("decade_means_" + state + ".csv"), district_estimates_csv(decade));
    }
    write_ingest_report(config, in, "aggregate");
}

void cmd_polarize(const RunConfig& config, std::ostream& log) {
    const Inputs in = load_inputs(config, false);
    const auto groups = groups_of(in.elections, Office::House);
    std::ostringstream csv;
    csv << "metric,group,state,cycle,value\n";
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& [key, group] : groups) {
        const FitResult result = load_fit(config, key);
        const auto voters = scope_distribution(result, group, Scope::state());
        const auto scores = candidate_scores(in.candidates, group);
        const auto report = polarization_report(voters, scores, derive_seed(config.seed, "polarize:" + group_tag(key)));
        const std::pair<const char*, const MetricTriple*> rows[] = {
            {"voters", &report.voters}, {"candidates", &report.candidates}, {"difference", &report.difference}};
        for (const auto& [name, t] : rows) {
            csv << "difference_of_means," << name << ',' << key.first << ',' << key.second << ','
                << format_double(t->diff_of_means) << '\n';
        }
        for (const auto& [name, t] : rows) {
            csv << "std_dev," << name << ',' << key.first << ',' << key.second << ',' << format_double(t->std_dev)
                << '\n';
        }
        for (const auto& [name, t] : rows) {
            csv << "excess_kurtosis," << name << ',' << key.first << ',' << key.second << ','
                << format_double(t->excess_kurtosis) << '\n';
        }
        auto entry = polarization_to_json(report);
        entry["state"] = key.first;
        entry["cycle"] = key.second;
        doc.push_back(std::move(entry));
        log << "polarize " << group_tag(key) << ": voter kurtosis " << format_double(report.voters.excess_kurtosis)
            << '\n';
    }
    write_text(config.out / "polarization" / "polarization.csv", csv.str());
    write_text(config.out / "polarization" / "polarization.json", doc.dump(1) + "\n");
}

namespace {

std::map<int, double> restrict_to(const std::map<int, double>& values, const std::map<int, double>& keys) {
    std::map<int, double> out;
    for (const auto& [d, v] : values) {
        if (keys.contains(d)) out[d] = v;
    }
    return out;
}

void add_report(std::vector<PredictionReport>& reports, PredictionTask task, const std::string& method,
                const std::map<int, double>& predictions, const std::map<int, double>& actuals, std::ostream& log) {
    const auto preds = restrict_to(predictions, actuals);
    const auto acts = restrict_to(actuals, preds);
    if (preds.size() < 2) {
        log << "skip " << to_string(task) << '/' << method << ": fewer than 2 comparable districts\n";
        return;
    }
    reports.push_back(make_report(task, method, preds, acts));
}

void add_baselines(std::vector<PredictionReport>& reports, PredictionTask task, const std::string& state, int cycle,
                   const std::map<int, double>& comparison_shares, const std::map<int, double>& actual,
                   const std::vector<SurveyRecord>& survey, const std::vector<MrpRecord>& mrp, std::ostream& log) {
    add_report(reports, task, "previous_share", comparison_shares, actual, log);
    if (!survey.empty()) {
        std::map<int, double> proxy;
        for (const auto& s : survey) {
            if (s.state == state && s.cycle == cycle) proxy[s.district] = baseline_survey_proxy(s.n_dem, s.n_rep, s.n_other);
        }
        add_report(reports, task, "survey", proxy, actual, log);
    }
    if (!mrp.empty()) {
        std::map<int, double> scores;
        for (const auto& m : mrp) {
            if (m.state == state) scores[m.district] = m.score;
        }
        const auto shares = restrict_to(actual, scores);
        if (shares.size() >= 3) {
            add_report(reports, task, "mrp_crossval", baseline_mrp_crossval(restrict_to(scores, shares), shares), shares,
                       log);
        }
    }
}

std::map<int, double> model_predictions(const FitResult& result, const std::vector<TargetPrecinct>& targets,
                                        std::ostream& log) {
    std::vector<TargetPrecinct> known;
    std::int64_t dropped = 0;
    for (const auto& t : targets) {
        if (result.assignments.contains(t.precinct_id)) {
            known.push_back(t);
        } else {
            ++dropped;
        }
    }
    if (dropped > 0) log << "note: " << dropped << " target precincts have no fitted assignment\n";
    std::set<int> districts;
    for (const auto& t : known) districts.insert(t.district);
    std::map<int, double> out;
    for (int d : districts) out[d] = predict_district_share(result, known, d);
    return out;
}

}  // namespace

void cmd_predict(const RunConfig& config, std::ostream& log) {
    const Inputs in = load_inputs(config, true);
    const auto survey = config.survey.empty() ? std::vector<SurveyRecord>{} : load_survey(config.survey);
    const auto mrp = config.mrp.empty() ? std::vector<MrpRecord>{} : load_mrp(config.mrp);
    const auto house = groups_of(in.elections, Office::House);
    const auto senate = groups_of(in.elections, Office::Senate);

    std::map<std::string, std::vector<PredictionReport>> per_state;
    for (const auto& [key, group] : house) {
        // Next cycle: this cycle's fit predicts the following House cycle in the same state.
        auto next = house.upper_bound(key);
        if (next != house.end() && next->first.first == key.first) {
            const FitResult result = load_fit(config, key);
            const auto targets = build_targets(next->second, in.candidates);
            const auto actual = observed_district_shares(next->second);
            auto& reports = per_state[key.first];
            add_report(reports, PredictionTask::NextCycle, "model", model_predictions(result, targets, log), actual, log);
            add_baselines(reports, PredictionTask::NextCycle, key.first, next->first.second,
                          observed_district_shares(group), actual, survey, mrp, log);
        }
        // Same year: House fit predicts the Senate contest of the same cycle.
        const auto sen = senate.find(key);
        if (sen != senate.end()) {
            const FitResult result = load_fit(config, key);
            const auto targets = build_targets(sen->second, in.candidates);
            const auto actual = observed_district_shares(sen->second);
            auto& reports = per_state[key.first];
            add_report(reports, PredictionTask::SameYear, "model", model_predictions(result, targets, log), actual, log);
            add_baselines(reports, PredictionTask::SameYear, key.first, key.second, observed_district_shares(group),
                          actual, survey, mrp, log);
        }
    }
    if (per_state.empty()) {
        throw Error(ErrorCode::MissingArtifact,
                    "no prediction task available: need consecutive House cycles or a same-cycle Senate contest");
    }
    for (const auto& [state, reports] : per_state) {
        write_text(config.out / "predictions" / ("report_" + state + ".csv"), prediction_rows_csv(reports));
        write_text(config.out / "predictions" / ("summary_" + state + ".csv"), prediction_summary_csv(reports));
        for (const auto& r : reports) {
            log << "predict " << state << ' ' << to_string(r.task) << '/' << r.method << ": mse=" << format_double(r.mse)
                << '\n';
        }
    }
}

void cmd_validate(const RunConfig& config, std::ostream& log) {
    if (config.survey.empty() && config.mrp.empty()) {
        throw Error(ErrorCode::MissingArtifact, "validate needs --survey and/or --mrp");
    }
    const Inputs in = load_inputs(config, true);
    const auto house = groups_of(in.elections, Office::House);
    std::map<std::string, std::map<int, std::map<int, DistrictEstimate>>> means;  // state -> cycle -> district
    for (const auto& [key, group] : house) {
        const FitResult result = load_fit(config, key);
        for (const auto& m : district_means(result, linked_only(group))) means[key.first][key.second][m.district] = m;
    }

    nlohmann::json results = nlohmann::json::array();
    std::ostringstream pairs;
    pairs << "state,source,cycle,district,transformed_mean,reference\n";
    auto correlate = [&](const std::string& state, const std::string& source, const std::string& cycle,
                         const std::vector<std::pair<int, std::pair<double, double>>>& rows) {
        std::vector<double> xs, ys;
        for (const auto& [d, v] : rows) {
            xs.push_back(v.first);
            ys.push_back(v.second);
            pairs << state << ',' << source << ',' << cycle << ',' << d << ',' << format_double(v.first) << ','
                  << format_double(v.second) << '\n';
        }
        const auto c = pearson_correlation(xs, ys);
        results.push_back({{"state", state}, {"source", source}, {"cycle", cycle}, {"r", c.r}, {"p_value", c.p_value},
                           {"n", c.n}});
        log << "validate " << state << ' ' << source << ' ' << cycle << ": r=" << format_double(c.r)
            << " p=" << format_double(c.p_value) << '\n';
    };

    if (!config.survey.empty()) {
        std::map<std::tuple<std::string, int, int>, double> ideology;
        for (const auto& s : load_survey(config.survey)) {
            if (std::isfinite(s.ideology)) ideology[{s.state, s.cycle, s.district}] = s.ideology;
        }
        for (const auto& [state, cycles] : means) {
            for (const auto& [cycle, districts] : cycles) {
                std::vector<std::pair<int, std::pair<double, double>>> rows;
                for (const auto& [d, est] : districts) {
                    const auto it = ideology.find({state, cycle, d});
                    if (it != ideology.end()) rows.push_back({d, {signed_log_transform(est.mean), it->second}});
                }
                if (!rows.empty()) correlate(state, "survey", std::to_string(cycle), rows);
            }
        }
    }
    if (!config.mrp.empty()) {
        std::map<std::pair<std::string, int>, double> scores;
        for (const auto& m : load_mrp(config.mrp)) scores[{m.state, m.district}] = m.score;
        for (const auto& [state, cycles] : means) {
            std::map<int, std::vector<DistrictEstimate>> by_district;
            int first = 0, last = 0;
            for (const auto& [cycle, districts] : cycles) {
                if (by_district.empty()) first = cycle;
                last = cycle;
                for (const auto& [d, est] : districts) by_district[d].push_back(est);
            }
            std::vector<std::pair<int, std::pair<double, double>>> rows;
            for (const auto& [d, ests] : by_district) {
                const auto it = scores.find({state, d});
                if (it != scores.end()) {
                    rows.push_back({d, {signed_log_transform(decade_mean(ests).mean), it->second}});
                }
            }
            const std::string label = first == last ? std::to_string(first)
                                                    : std::to_string(first) + "-" + std::to_string(last);
            if (!rows.empty()) correlate(state, "mrp", label, rows);
        }
    }
    if (results.empty()) throw Error(ErrorCode::MissingArtifact, "no district overlaps between estimates and references");
    write_text(config.out / "validation" / "validation.json", results.dump(1) + "\n");
    write_text(config.out / "validation" / "pairs.csv", pairs.str());
}

void cmd_simulate(const RunConfig& config, std::ostream& log) {
    SyntheticSpec spec = named_scenario(config.scenario, config.seed);
    spec.precincts = config.precincts;
    spec.voters = {config.voters};
    spec.districts = config.district_count;
    spec.senate = config.senate;
    if (config.cycles < 1 || config.cycles > 2) throw Error(ErrorCode::InvalidSpec, "--cycles must be 1 or 2");

    const SyntheticData data = generate(spec);
    std::vector<CandidateRecord> candidates = data.candidates;
    std::vector<ElectionRecord> elections = data.elections;
    std::vector<int> cycles = {spec.cycle};
    if (config.cycles == 2) {
        const SyntheticData next = generate_followup(spec, data, config.shift);
        candidates.insert(candidates.end(), next.candidates.begin(), next.candidates.end());
        elections.insert(elections.end(), next.elections.begin(), next.elections.end());
        cycles.push_back(spec.cycle + 2);
    }

    const fs::path dir = config.out / "data";
    std::ostringstream cands, elecs, centers;
    write_candidates(cands, candidates);
    write_elections(elecs, elections);
    write_centers(centers, data.centers);
    write_text(dir / "candidates.csv", cands.str());
    write_text(dir / "elections.csv", elecs.str());
    write_text(dir / "centers.csv", centers.str());
    write_text(dir / "districts.geojson", boundaries_to_geojson(data.boundaries) + "\n");
    write_text(dir / "truth.json", truth_to_json(spec, data).dump(1) + "\n");

    // Reference columns derived from the planted truth plus noise, for predict/validate.
    std::map<int, std::pair<double, std::int64_t>> planted_mean;
    for (int i = 0; i < spec.precincts; ++i) {
        const int d = data.elections[i].district.value_or(0);
        const int cluster = data.assignments[i];
        const double m = spec.bimodal ? spec.bimodal->left_weight[cluster] * mean(spec.bimodal->left) +
                                            (1.0 - spec.bimodal->left_weight[cluster]) * mean(spec.bimodal->right)
                                      : mean(spec.planted.eta[cluster]);
        planted_mean[d].first += m * static_cast<double>(spec.voters_in(i));
        planted_mean[d].second += spec.voters_in(i);
    }
    Rng rng(derive_seed(config.seed, "simulate-references"));
    std::ostringstream survey, mrp;
    survey << "state,district,cycle,n_dem,n_rep,n_other,ideology\n";
    mrp << "state,district,mrp_score\n";
    for (int cycle : cycles) {
        std::vector<ElectionRecord> house;
        for (const auto& e : elections) {
            if (e.cycle == cycle && e.office == Office::House) house.push_back(e);
        }
        for (const auto& [d, share] : observed_district_shares(house)) {
            std::int64_t n_dem = 0, n_rep = 0, n_other = 0;
            for (int r = 0; r < 400; ++r) {
                const double u = rng.uniform();
                if (u < 0.1) {
                    ++n_other;
                } else if (u < 0.1 + 0.9 * share) {
                    ++n_dem;
                } else {
                    ++n_rep;
                }
            }
            const auto& pm = planted_mean[d];
            const double ideology = pm.first / static_cast<double>(pm.second) + rng.normal(0.0, 0.3);
            survey << spec.state << ',' << d << ',' << cycle << ',' << n_dem << ',' << n_rep << ',' << n_other << ','
                   << format_double(ideology) << '\n';
        }
    }
    for (const auto& [d, pm] : planted_mean) {
        mrp << spec.state << ',' << d << ',' << format_double(pm.first / static_cast<double>(pm.second) + rng.normal(0.0, 0.2))
            << '\n';
    }
    write_text(dir / "survey.csv", survey.str());
    write_text(dir / "mrp.csv", mrp.str());
    log << "simulate " << config.scenario << ": " << spec.precincts << " precincts -> " << dir.string() << '\n';
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Infer voter preference distributions from precinct vote shares and candidate ideology scores"};
    app.require_subcommand(1);
    RunConfig config;
    std::string family = "normal";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--elections", config.elections, "Election results CSV");
        sub->add_option("--candidates", config.candidates, "Candidate CFscore CSV");
        sub->add_option("--centers", config.centers, "Precinct center CSV");
        sub->add_option("--districts", config.districts, "District boundary GeoJSON");
        sub->add_option("--survey", config.survey, "Survey CSV");
        sub->add_option("--mrp", config.mrp, "MRP district score CSV");
        sub->add_option("--out", config.out, "Output directory")->default_str("out");
        sub->add_option("--seed", config.seed, "Master seed");
        sub->add_option("--k", config.k, "Number of clusters")->check(CLI::Range(1, 64));
        sub->add_option("--family", family, "Component family")
            ->check(CLI::IsMember({"normal", "laplace", "uniform"}, CLI::ignore_case));
        sub->add_option("--chains", config.chains, "Independent MCMC chains")->check(CLI::Range(1, 1024));
        sub->add_option("--iters", config.iterations, "Sweeps per chain")
            ->check(CLI::Range(std::int64_t{1}, std::int64_t{1} << 40));
        sub->add_option("--step-size", config.step_size, "Random-walk proposal scale")->check(CLI::PositiveNumber);
    };

    struct Command {
        const char* name;
        const char* help;
        void (*fn)(const RunConfig&, std::ostream&);
    };
    const Command commands[] = {
        {"fit", "Fit the mixture model to every House state/cycle", cmd_fit},
        {"aggregate", "District and state preference distributions", cmd_aggregate},
        {"polarize", "Polarization metrics of voters and candidates", cmd_polarize},
        {"predict", "Next-cycle and same-year vote-share predictions", cmd_predict},
        {"simulate", "Write a synthetic dataset", cmd_simulate},
        {"validate", "Correlate district estimates with survey/MRP columns", cmd_validate},
    };
    std::map<CLI::App*, const Command*> by_app;
    for (const auto& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        add_common(sub);
        if (std::string(c.name) == "simulate") {
            sub->add_option("--scenario", config.scenario, "standard | bimodal | prediction");
            sub->add_option("--precincts", config.precincts, "Precinct count")->check(CLI::Range(1, 1000000));
            sub->add_option("--voters", config.voters, "Voters per precinct")
                ->check(CLI::Range(std::int64_t{1}, std::int64_t{1} << 32));
            sub->add_option("--district-count", config.district_count, "Districts")->check(CLI::Range(1, 600));
            sub->add_option("--cycles", config.cycles, "1, or 2 to add a shifted next cycle")->check(CLI::Range(1, 2));
            sub->add_option("--shift", config.shift, "Candidate shift for the next cycle");
            sub->add_flag("--senate", config.senate, "Add a statewide Senate contest");
        }
        by_app[sub] = &c;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, m;
        app.exit(e, o, m);
        err << m.str() << o.str();
        return 2;
    }

    try {
        config.family = parse_family(family);
        for (const auto& [sub, command] : by_app) {
            if (sub->parsed()) {
                config.subcommand = command->name;
                command->fn(config, out);
            }
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace prefinfer::cli
