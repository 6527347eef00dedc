// Copyright 2026 The semimarkov Authors
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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "semimarkov/classical_semimarkov.h"
#include "semimarkov/errors.h"
#include "semimarkov/montecarlo.h"
#include "semimarkov/nonmarkov.h"
#include "semimarkov/qubit.h"
#include "semimarkov/renewal.h"
#include "semimarkov/spec_parse.h"
#include "semimarkov/waiting_time.h"

namespace py = pybind11;
using namespace semimarkov;

namespace {

std::vector<double> sample(const ExpPolyFunction& f, const std::vector<double>& times) {
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) {
        out.push_back(f(t));
    }
    return out;
}

py::dict measure_dict(const MeasureResult& r) {
    py::list contributions;
    for (const auto& c : r.contributions) {
        contributions.append(py::make_tuple(c.interval.start, c.interval.end, c.weight));
    }
    py::dict d;
    d["method"] = std::string(to_string(r.method));
    d["value"] = r.value;
    d["infinite"] = r.infinite;
    d["horizon"] = r.horizon;
    d["tail_bound"] = r.tail_bound;
    d["direction"] = r.direction;
    d["converged"] = r.converged;
    d["contributions"] = contributions;
    return d;
}

QubitState state_from(const Eigen::Vector3d& bloch) { return QubitState::from_bloch(bloch); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Semi-Markov dynamics and non-Markovianity diagnostics";

    py::register_exception<SpecError>(m, "SpecError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

    py::class_<HypoExpWTD>(m, "HypoExpWTD")
        .def(py::init<std::vector<double>>(), py::arg("rates"))
        .def_static("exponential", &HypoExpWTD::exponential, py::arg("rate"))
        .def_static("erlang", &HypoExpWTD::erlang, py::arg("stages"), py::arg("rate"))
        .def_static("parse", &parse_wtd, py::arg("text"))
        .def_property_readonly("rates", [](const HypoExpWTD& w) {
            return std::vector<double>(w.rates().begin(), w.rates().end());
        })
        .def_property_readonly("mean", &HypoExpWTD::mean)
        .def("pdf", [](const HypoExpWTD& w, const std::vector<double>& t) { return sample(pdf(w), t); })
        .def("survival", [](const HypoExpWTD& w, const std::vector<double>& t) { return sample(survival(w), t); })
        .def("__eq__", &HypoExpWTD::operator==)
        .def("__str__", &HypoExpWTD::to_string)
        .def("__repr__", [](const HypoExpWTD& w) { return "HypoExpWTD('" + w.to_string() + "')"; });

    py::class_<PauliChannel>(m, "PauliChannel")
        .def(py::init<const Eigen::Vector4d&>(), py::arg("weights"))
        .def_static("identity", &PauliChannel::identity)
        .def_static("phase_flip", &PauliChannel::phase_flip)
        .def_static("ep", &PauliChannel::ep)
        .def_static("mixture", &PauliChannel::mixture, py::arg("nu"))
        .def_static("parse", &parse_channel, py::arg("text"))
        .def_property_readonly("weights", &PauliChannel::lambda)
        .def_property_readonly("eigenvalues", &PauliChannel::mu)
        .def("__str__", &PauliChannel::to_string)
        .def("__repr__", [](const PauliChannel& c) { return "PauliChannel('" + c.to_string() + "')"; });

    m.def(
        "generating_function",
        [](const HypoExpWTD& w, double mu, const std::vector<double>& t) {
            return sample(generating_function(w, mu).value, t);
        },
        py::arg("wtd"), py::arg("mu"), py::arg("times"), "lambda_mu(t) = sum_n mu^n p_n(t) on the given times.");
    m.def(
        "jump_distribution",
        [](const HypoExpWTD& w, double t) { return JumpCountLaw(w).distribution(t); },
        py::arg("wtd"), py::arg("t"), "Truncated law p_0(t), p_1(t), ... by uniformization.");

    py::class_<DynamicalMap>(m, "DynamicalMap")
        .def(py::init<PauliChannel, HypoExpWTD>(), py::arg("channel"), py::arg("wtd"))
        .def_property_readonly("channel", &DynamicalMap::channel)
        .def_property_readonly("wtd", &DynamicalMap::wtd)
        .def(
            "eigenvalues",
            [](const DynamicalMap& map, double t) { return Eigen::Vector3d(map.snapshot(t).lambda); }, py::arg("t"))
        .def(
            "evolve",
            [](const DynamicalMap& map, const Eigen::Vector3d& bloch, double t) {
                return evolve_state(map.snapshot(t), state_from(bloch)).bloch();
            },
            py::arg("bloch"), py::arg("t"), "Evolved Bloch vector.")
        .def(
            "trace_distance",
            [](const DynamicalMap& map, const Eigen::Vector3d& a, const Eigen::Vector3d& b, double t) {
                auto snap = map.snapshot(t);
                return trace_distance(evolve_state(snap, state_from(a)), evolve_state(snap, state_from(b)));
            },
            py::arg("a"), py::arg("b"), py::arg("t"))
        .def(
            "tcl_rates",
            [](const DynamicalMap& map, double t) {
                auto c = tcl_coefficients(map, t);
                py::dict d;
                d["singular"] = c.singular;
                d["canonical"] = c.canonical;
                d["dephasing"] = c.dephasing;
                d["flip"] = c.flip;
                d["x_pair"] = c.x_pair;
                d["y_pair"] = c.y_pair;
                return d;
            },
            py::arg("t"));

    m.def(
        "blp_measure_dephasing",
        [](const PauliChannel& ch, const HypoExpWTD& w) { return measure_dict(blp_measure_dephasing(ch, w)); },
        py::arg("channel"), py::arg("wtd"));
    m.def(
        "blp_measure_numeric", [](const DynamicalMap& map) { return measure_dict(blp_measure_numeric(map, {})); },
        py::arg("map"));
    m.def(
        "hou_measure",
        [](const DynamicalMap& map, double window, int samples) {
            HouConfig cfg;
            cfg.window = window;
            cfg.samples = samples;
            return measure_dict(hou_measure(map, cfg));
        },
        py::arg("map"), py::arg("window") = 20.0, py::arg("samples") = 20001);
    m.def(
        "rhp_measure",
        [](const DynamicalMap& map, double window, int samples) { return measure_dict(rhp_measure(map, window, samples)); },
        py::arg("map"), py::arg("window") = 20.0, py::arg("samples") = 20001);
    m.def(
        "divisibility_signs",
        [](const DynamicalMap& map, const std::vector<double>& t_grid, const std::vector<double>& s_grid) {
            auto scan = divisibility_scan(map, t_grid, s_grid);
            Eigen::MatrixXi signs(t_grid.size(), s_grid.size());
            for (size_t k = 0; k < scan.cells.size(); k++) {
                signs(static_cast<Eigen::Index>(k / s_grid.size()), static_cast<Eigen::Index>(k % s_grid.size())) =
                    scan.cells[k].sign;
            }
            return py::make_tuple(signs, scan.singular_times);
        },
        py::arg("map"), py::arg("t_grid"), py::arg("s_grid"),
        "Sign matrix (+1 CP, -1 violation, 0 singular) over t rows and s columns, plus singular times.");

    m.def(
        "classical_propagator",
        [](double pi, double sigma, const HypoExpWTD& w, double t, double s) {
            return Eigen::Matrix2d(propagator(SemiMarkovSpec(pi, sigma, w), t, s).entries);
        },
        py::arg("pi"), py::arg("sigma"), py::arg("wtd"), py::arg("t"), py::arg("s") = 0.0);

    m.def(
        "estimate_generating_function",
        [](const HypoExpWTD& w, double mu, const std::vector<double>& times, std::uint64_t n_traj, std::uint64_t seed) {
            SimConfig cfg;
            cfg.n_traj = n_traj;
            cfg.seed = seed;
            cfg.horizon = times.empty() ? 1.0 : std::max(1e-12, *std::max_element(times.begin(), times.end()));
            std::vector<std::pair<double, double>> out;
            for (const auto& e : estimate_generating_function(w, mu, times, cfg)) {
                out.emplace_back(e.mean, e.std_error);
            }
            return out;
        },
        py::arg("wtd"), py::arg("mu"), py::arg("times"), py::arg("n_traj") = 100000, py::arg("seed") = 1,
        "(mean, standard error) per time.");
}
