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
// Python bindings for the core operations.

#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "prefinfer/aggregate.hpp"
#include "prefinfer/cli.hpp"
#include "prefinfer/error.hpp"
#include "prefinfer/io.hpp"
#include "prefinfer/model.hpp"
#include "prefinfer/polarization.hpp"
#include "prefinfer/sampler.hpp"
#include "prefinfer/synthetic.hpp"

namespace py = pybind11;
using namespace prefinfer;

namespace {

AggregateDistribution mixture_of(const std::vector<std::pair<double, ComponentParams>>& parts) {
    AggregateDistribution d;
    for (const auto& [w, p] : parts) d.components.push_back({w, p});
    return d;
}

std::vector<PrecinctObs> observations_of(const SyntheticData& data) {
    const CandidateIndex idx(data.candidates);
    return build_observations(data.elections, idx);
}

}  // namespace

PYBIND11_MODULE(_prefinfer, m) {
    m.doc() = "Precinct voter preference mixtures fitted by Metropolis-Hastings";
    py::register_exception<Error>(m, "PrefinferError", PyExc_RuntimeError);

    py::enum_<Family>(m, "Family")
        .value("NORMAL", Family::Normal)
        .value("LAPLACE", Family::Laplace)
        .value("UNIFORM", Family::Uniform);
    m.def("parse_family", [](const std::string& s) { return parse_family(s); });

    py::class_<ComponentParams>(m, "Component")
        .def(py::init(&ComponentParams::make), py::arg("family"), py::arg("a"), py::arg("b"))
        .def_readonly("family", &ComponentParams::family)
        .def_readonly("a", &ComponentParams::a)
        .def_readonly("b", &ComponentParams::b)
        .def("pdf", [](const ComponentParams& p, double x) { return pdf(p, x); })
        .def("cdf", [](const ComponentParams& p, double x) { return cdf(p, x); })
        .def("ccdf", [](const ComponentParams& p, double x) { return ccdf(p, x); })
        .def("mean", [](const ComponentParams& p) { return mean(p); })
        .def("central_moment", [](const ComponentParams& p, int z) { return central_moment(p, z); })
        .def("log_prior", [](const ComponentParams& p) { return log_prior(p); })
        .def("__repr__", [](const ComponentParams& p) {
            std::ostringstream s;
            s << "Component(" << to_string(p.family) << ", a=" << p.a << ", b=" << p.b << ")";
            return s.str();
        });

    py::class_<MixtureParams>(m, "MixtureParams")
        .def(py::init([](std::vector<double> theta, std::vector<ComponentParams> eta) {
                 MixtureParams p{std::move(theta), std::move(eta)};
                 p.validate();
                 return p;
             }),
             py::arg("theta"), py::arg("eta"))
        .def_readonly("theta", &MixtureParams::theta)
        .def_readonly("eta", &MixtureParams::eta)
        .def_property_readonly("k", &MixtureParams::k);

    py::class_<PrecinctObs>(m, "Precinct")
        .def(py::init<std::string, double, double, std::int64_t, std::int64_t>(), py::arg("precinct_id"),
             py::arg("c0"), py::arg("c1"), py::arg("n0"), py::arg("n1"))
        .def_readonly("precinct_id", &PrecinctObs::precinct_id)
        .def_readonly("c0", &PrecinctObs::c0)
        .def_readonly("c1", &PrecinctObs::c1)
        .def_readonly("n0", &PrecinctObs::n0)
        .def_readonly("n1", &PrecinctObs::n1);

    m.def("phi", [](const PrecinctObs& o, const ComponentParams& c) { return phi(o, c); });
    m.def("precinct_log_marginal", &precinct_log_marginal);
    m.def("log_likelihood",
          [](const MixtureParams& p, const std::vector<PrecinctObs>& d) { return log_likelihood(p, d); });
    m.def("log_posterior",
          [](const MixtureParams& p, const std::vector<PrecinctObs>& d) { return log_posterior(p, d); });
    m.def(
        "load_observations",
        [](const std::filesystem::path& elections, const std::filesystem::path& candidates) {
            const CandidateIndex idx(load_candidates(candidates));
            const auto load = load_elections(elections, idx);
            return build_observations(load.records, idx);
        },
        py::arg("elections"), py::arg("candidates"));

    py::class_<ChainSummary>(m, "ChainSummary")
        .def_readonly("seed", &ChainSummary::seed)
        .def_readonly("best_log_posterior", &ChainSummary::best_log_posterior)
        .def_readonly("accept_rates", &ChainSummary::accept_rates);

    py::class_<FitResult>(m, "FitResult")
        .def_readonly("map_params", &FitResult::map_params)
        .def_readonly("map_log_posterior", &FitResult::map_log_posterior)
        .def_readonly("assignments", &FitResult::assignments)
        .def_readonly("chains", &FitResult::chains)
        .def("to_json", [](const FitResult& f) { return fit_to_json(f).dump(1); })
        .def_static("from_json", [](const std::string& s) {
            try {
                return fit_from_json(nlohmann::json::parse(s));
            } catch (const nlohmann::json::exception& e) {
                throw Error(ErrorCode::IoError, e.what());
            }
        });

    m.def(
        "fit",
        [](const std::vector<PrecinctObs>& data, int k, Family family, int chains, std::int64_t iterations,
           double step_size, std::uint64_t seed, unsigned threads) {
            ChainConfig c;
            c.k = k;
            c.family = family;
            c.chains = chains;
            c.iterations = iterations;
            c.step_size = step_size;
            c.seed = seed;
            c.threads = threads;
            py::gil_scoped_release release;
            return fit(c, data);
        },
        py::arg("data"), py::arg("k") = 4, py::arg("family") = Family::Normal, py::arg("chains") = 4,
        py::arg("iterations") = 50000, py::arg("step_size") = 0.1, py::arg("seed") = 0, py::arg("threads") = 0);
    m.def("map_assignment", &map_assignment);

    py::class_<SyntheticSpec>(m, "SyntheticSpec")
        .def_readwrite("precincts", &SyntheticSpec::precincts)
        .def_readwrite("voters", &SyntheticSpec::voters)
        .def_readwrite("seed", &SyntheticSpec::seed)
        .def_readwrite("districts", &SyntheticSpec::districts)
        .def_readwrite("planted", &SyntheticSpec::planted)
        .def_readwrite("senate", &SyntheticSpec::senate);
    m.def("scenario", &named_scenario, py::arg("name"), py::arg("seed") = 0);

    py::class_<SyntheticData>(m, "SyntheticData")
        .def_readonly("assignments", &SyntheticData::assignments)
        .def("observations", &observations_of);
    m.def("generate", &generate);
    m.def("generate_followup", &generate_followup, py::arg("spec"), py::arg("base"), py::arg("shift"));

    py::class_<RecoveryScore>(m, "RecoveryScore")
        .def_readonly("param_error", &RecoveryScore::param_error)
        .def_readonly("assignment_accuracy", &RecoveryScore::assignment_accuracy)
        .def_readonly("permutation", &RecoveryScore::permutation);
    m.def("recovery_score", &recovery_score, py::arg("fit"), py::arg("spec"), py::arg("data"));

    // Mixtures are given as [(weight, Component), ...].
    m.def("mixture_mean", [](const std::vector<std::pair<double, ComponentParams>>& c) {
        return mixture_mean(mixture_of(c));
    });
    m.def("mixture_sd", [](const std::vector<std::pair<double, ComponentParams>>& c) {
        return mixture_sd(mixture_of(c));
    });
    m.def("mixture_central_moment", [](const std::vector<std::pair<double, ComponentParams>>& c, int z) {
        return mixture_central_moment(mixture_of(c), z);
    });
    m.def("mixture_excess_kurtosis", [](const std::vector<std::pair<double, ComponentParams>>& c) {
        return mixture_excess_kurtosis(mixture_of(c));
    });

    py::class_<TwoNormalFit>(m, "TwoNormalFit")
        .def_readonly("mu1", &TwoNormalFit::mu1)
        .def_readonly("mu2", &TwoNormalFit::mu2)
        .def_readonly("sigma", &TwoNormalFit::sigma)
        .def_readonly("iterations", &TwoNormalFit::iterations)
        .def_readonly("converged", &TwoNormalFit::converged);
    m.def(
        "fit_two_normal",
        [](const std::vector<double>& xs, double tol, int max_iter) { return fit_two_normal(xs, tol, max_iter); },
        py::arg("sample"), py::arg("tol") = 1e-8, py::arg("max_iter") = 1000);
    m.def("difference_of_means", [](const std::vector<double>& xs) { return difference_of_means(xs); });
    m.def("signed_log_transform", &signed_log_transform);

    m.def(
        "run_cli",
        [](std::vector<std::string> args) {
            args.insert(args.begin(), "prefinfer");
            std::vector<const char*> argv;
            for (const auto& a : args) argv.push_back(a.c_str());
            std::ostringstream out, err;
            int code = 0;
            {
                py::gil_scoped_release release;
                code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs a subcommand; returns (exit_code, stdout, stderr).");
}
