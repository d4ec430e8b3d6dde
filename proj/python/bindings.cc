// Copyright 2026 The hamxform Authors
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

#include <numbers>
#include <string>
#include <vector>

#include "hamxform/adiabatic.h"
#include "hamxform/config.h"
#include "hamxform/runner.h"
#include "pybind11/eigen.h"
#include "pybind11/pybind11.h"
#include "pybind11/stl.h"

namespace py = pybind11;
using namespace py::literals;
using namespace hamxform;

namespace {

Problem make_problem(const std::string &kind, int n_qubits, std::size_t marked, double field, double coupling) {
    if (kind == "grover") {
        GroverProblem problem{n_qubits, marked};
        problem.validate();
        return problem;
    }
    if (kind == "ising") {
        return IsingProblem::chain(n_qubits, field, coupling);
    }
    throw std::invalid_argument("problem must be 'grover' or 'ising'");
}

py::dict nmr_report_dict(const NmrReport &r) {
    return py::dict(
        "g"_a = r.g, "detuning"_a = r.detuning, "adiabaticity_ratio"_a = r.adiabaticity_ratio,
        "min_fidelity"_a = r.analytic_fidelity.min_value, "min_fidelity_numeric"_a = r.numeric_fidelity.min_value,
        "fidelity_floor"_a = r.fidelity_floor, "fidelity_closed_form_error"_a = r.fidelity_closed_form_error,
        "s_closed_vs_composed_analytic"_a = r.s_closed_vs_composed_analytic,
        "correction_gate_distance"_a = r.correction_gate_distance,
        "two_gate_fidelity_composed"_a = r.two_gate_fidelity_composed,
        "two_gate_fidelity_closed_form"_a = r.two_gate_fidelity_closed_form,
        "verify_composed_pass"_a = r.verify_composed.pass, "verify_closed_form_pass"_a = r.verify_closed_form.pass,
        "times"_a = r.analytic_fidelity.times, "fidelity"_a = r.analytic_fidelity.values);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Frame transformations of time-dependent Hamiltonians";
    m.attr("__version__") = HAMXFORM_VERSION;

    m.def(
        "embed",
        [](const std::string &spec, int n_qubits, double coefficient) {
            return embed(PauliString::parse(spec, coefficient), n_qubits);
        },
        "spec"_a, "n_qubits"_a, "coefficient"_a = 1.0,
        "Dense matrix of a Pauli string such as 'Z0 X2'; qubit 0 is the most significant bit.");
    m.def("herm_expm", &herm_expm, "generator"_a, "scale"_a, "exp(-i scale G) for Hermitian G.");
    m.def(
        "phase_aligned_distance",
        [](const DenseOperator &a, const DenseOperator &b) { return phase_aligned_distance(a, b).distance; }, "a"_a,
        "b"_a);
    m.def("fidelity", &fidelity, "a"_a, "b"_a);

    m.def(
        "nmr_hamiltonian",
        [](double omega0, double omega, double g, double t) {
            return build_nmr(NmrParams::harmonic(omega0, omega, g)).eval(t);
        },
        "omega0"_a, "omega"_a, "g"_a, "t"_a);
    m.def(
        "rotating_frame_hamiltonian",
        [](double omega0, double omega, double g, double t) {
            return build_rotating_frame(NmrParams::harmonic(omega0, omega, g)).eval(t);
        },
        "omega0"_a, "omega"_a, "g"_a, "t"_a);
    m.def(
        "analytic_nmr_propagator",
        [](double omega0, double omega, double g, double t) {
            return analytic_nmr_propagator(NmrParams::harmonic(omega0, omega, g), t);
        },
        "omega0"_a, "omega"_a, "g"_a, "t"_a);
    m.def(
        "analytic_slow_propagator",
        [](double omega0, double omega, double g, double t) {
            return analytic_slow_propagator(NmrParams::harmonic(omega0, omega, g), t);
        },
        "omega0"_a, "omega"_a, "g"_a, "t"_a);
    m.def(
        "propagate_nmr",
        [](double omega0, double omega, double g, double t_end, std::size_t n_steps) {
            auto trace = propagate(build_nmr(NmrParams::harmonic(omega0, omega, g)), TimeGrid(0.0, t_end, n_steps),
                                   {n_steps});
            return DenseOperator(trace.final());
        },
        "omega0"_a, "omega"_a, "g"_a, "t_end"_a, "n_steps"_a,
        "Final midpoint-exponential propagator of the driven qubit.");
    m.def("nmr_ground_fidelity", &nmr_ground_fidelity, "g"_a, "detuning"_a, "t"_a);
    m.def("nmr_fidelity_floor", &nmr_fidelity_floor, "g"_a, "detuning"_a);
    m.def(
        "nmr_hidden_adiabaticity",
        [](double omega0, double omega, double g, double t_end, std::size_t n_steps) {
            return nmr_report_dict(
                nmr_hidden_adiabaticity(NmrParams::harmonic(omega0, omega, g), TimeGrid(0.0, t_end, n_steps)));
        },
        "omega0"_a, "omega"_a, "g"_a, "t_end"_a, "n_steps"_a);

    m.def(
        "problem_matrix",
        [](const std::string &kind, int n_qubits, std::size_t marked, double field, double coupling) {
            return problem_matrix(make_problem(kind, n_qubits, marked, field, coupling));
        },
        "kind"_a, "n_qubits"_a, "marked"_a = 0, "field"_a = 0.5, "coupling"_a = -1.0);
    m.def(
        "grover_aqc_run",
        [](int n_qubits, std::size_t marked, double gamma0, double runtime, std::size_t n_steps,
           const std::string &initial) {
            AqcOptions options;
            options.initial = initial == "minus" ? InitialState::UniformMinus : InitialState::ExactGround;
            AqcRunResult r = grover_aqc_run(n_qubits, marked, gamma0, runtime, n_steps, options);
            return py::dict(
                "success_probability"_a = r.success_probability,
                "final_fidelity_vs_marked"_a = r.final_fidelity_vs_marked.value_or(0.0), "min_gap"_a = r.min_gap,
                "adiabaticity_ratio"_a = r.adiabaticity_ratio,
                "initial_overlap_uniform"_a = r.initial_overlap_uniform);
        },
        "n_qubits"_a, "marked"_a, "gamma0"_a, "runtime"_a, "n_steps"_a, "initial"_a = "ground");
    m.def(
        "fast_counterpart_equivalence",
        [](const std::string &kind, int n_qubits, std::size_t marked, double gamma0, double runtime,
           std::size_t n_steps, double phi_cycles) {
            Problem problem = make_problem(kind, n_qubits, marked, 0.5, -1.0);
            Schedule phi = Schedule::harmonic(2.0 * std::numbers::pi * phi_cycles / runtime);
            FastCounterpartReport r = fast_counterpart_equivalence(
                problem, default_annealing_schedule(gamma0, runtime), phi, runtime, n_steps);
            return py::dict(
                "fidelity_closed_form"_a = r.fidelity_closed_form, "fidelity_composed"_a = r.fidelity_composed,
                "slow_success_probability"_a = r.slow_success_probability);
        },
        "kind"_a, "n_qubits"_a, "marked"_a, "gamma0"_a, "runtime"_a, "n_steps"_a, "phi_cycles"_a = 10.0);

    m.def("experiment_kinds", [] {
        std::vector<std::string> names;
        for (const auto &kind : experiment_kinds()) {
            names.push_back(kind.name);
        }
        return names;
    });
    m.def(
        "run_experiment_json",
        [](const std::string &config_json, const std::vector<std::string> &overrides) {
            ExperimentConfig config = ExperimentConfig::parse(config_json).with_overrides(overrides);
            RunResult result;
            {
                py::gil_scoped_release release;
                result = run_experiment(config, RunOptions{1, utc_timestamp()});
            }
            return result.record.dump();
        },
        "config_json"_a, "overrides"_a = std::vector<std::string>{});

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
}
