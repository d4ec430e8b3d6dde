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

#include "hamxform/runner.h"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <numbers>

#include "hamxform/adiabatic.h"
#include "hamxform/hamiltonians.h"
#include "hamxform/transformability.h"

namespace hamxform {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kComposedFidelityTolerance = 1e-12;
constexpr double kMinimumOrder = 1.8;

class Verdicts {
   public:
    void at_most(const std::string &name, double value, double threshold) { add(name, value, "<=", threshold, value <= threshold); }
    void at_least(const std::string &name, double value, double threshold) { add(name, value, ">=", threshold, value >= threshold); }

    void health(double unitarity, double hermiticity) {
        at_most("max_unitarity_defect", unitarity, kUnitaryTolerance);
        at_most("max_hermitian_defect", hermiticity, 1e-12);
    }

    // Mirrors the verify_transform rule: round-off residuals pass outright, otherwise
    // the residual must sit under the calibrated bound and converge at second order.
    void transform(const std::string &prefix, const TransformReport &r) {
        if (r.max_residual <= kResidualFloor) {
            at_most(prefix + "max_residual", r.max_residual, kResidualFloor);
            return;
        }
        at_most(prefix + "max_residual", r.max_residual, r.bound);
        at_least(prefix + "observed_order", r.observed_order, kMinimumOrder);
    }

    json to_json() const { return list_; }
    bool pass() const { return pass_; }

   private:
    void add(const std::string &name, double value, const char *comparison, double threshold, bool ok) {
        list_.push_back({{"name", name}, {"value", value}, {"comparison", comparison}, {"threshold", threshold}, {"pass", ok}});
        pass_ = pass_ && ok;
    }

    json list_ = json::array();
    bool pass_ = true;
};

json transform_model(const TransformReport &r) {
    return {
        {"fd_step", r.fd_step},
        {"control_max_residual", r.control_max_residual},
        {"model_constant", r.model_constant},
        {"slack", kModelSlack},
        {"floor", kResidualFloor},
        {"bound", r.bound},
        {"observed_order", r.observed_order},
        {"minimum_order", kMinimumOrder},
    };
}

Curve curve_of(std::string name, const FidelityCurve &c) { return Curve{std::move(name), c.times, c.values}; }
Curve curve_of(std::string name, const ResidualCurve &c) { return Curve{std::move(name), c.times, c.values}; }

json fidelity_summary(const FidelityCurve &c) {
    json out{{"min_value", c.min_value}, {"truncated", c.truncated}, {"nodes", c.values.size()}};
    if (c.truncated) {
        out["diagnostic"] = c.diagnostic;
    }
    return out;
}

Schedule annealing_schedule(const ExperimentConfig &config, double gamma0, double runtime) {
    if (config.string("schedule") == "cosine") {
        return Schedule::cosine_ramp(gamma0, 0.0, runtime);
    }
    return default_annealing_schedule(gamma0, runtime);
}

// Smallest divisor of n that stores at most about 1000 nodes.
std::size_t curve_stride(std::size_t n_steps) {
    std::size_t stride = std::max<std::size_t>(1, n_steps / 1000);
    while (n_steps % stride != 0) {
        stride++;
    }
    return stride;
}

std::size_t steps_of(const ExperimentConfig &config) { return static_cast<std::size_t>(config.integer("n_steps")); }

RunResult run_nmr(const ExperimentConfig &config) {
    NmrParams p = NmrParams::harmonic(config.number("omega0"), config.number("omega"), config.number("g"));
    double detuning = p.detuning();
    double t_end;
    if (config.is_null("t_end")) {
        if (detuning == 0.0) {
            throw ConfigError("field 't_end': required when omega equals omega0");
        }
        t_end = kPi / (2.0 * std::abs(detuning));
    } else {
        t_end = config.number("t_end");
    }
    std::size_t n_steps = config.is_null("n_steps")
                              ? static_cast<std::size_t>(std::max(1.0, std::round(t_end / 1e-3)))
                              : steps_of(config);
    TimeGrid grid(0.0, t_end, n_steps);
    NmrReport r = nmr_hidden_adiabaticity(p, grid);

    RunResult out;
    out.record["metrics"] = {
        {"g", r.g},
        {"detuning", r.detuning},
        {"adiabaticity_ratio", std::isfinite(r.adiabaticity_ratio) ? json(r.adiabaticity_ratio) : json(nullptr)},
        {"t_end", t_end},
        {"n_steps", n_steps},
        {"dt", grid.dt()},
        {"min_fidelity", r.analytic_fidelity.min_value},
        {"min_fidelity_numeric", r.numeric_fidelity.min_value},
        {"fidelity_floor", r.fidelity_floor},
        {"fidelity_closed_form_error", r.fidelity_closed_form_error},
        {"fidelity_curve", fidelity_summary(r.analytic_fidelity)},
        {"s_closed_vs_composed_analytic", r.s_closed_vs_composed_analytic},
        {"s_closed_vs_composed_numeric", r.s_closed_vs_composed_numeric},
        {"fast_propagator_error", r.fast_propagator_error},
        {"correction_gate_distance", r.correction_gate_distance},
        {"two_gate_fidelity_composed", r.two_gate_fidelity_composed},
        {"two_gate_fidelity_closed_form", r.two_gate_fidelity_closed_form},
        {"two_gate_ground_fidelity", r.two_gate_ground_fidelity},
        {"two_gate_excited_fidelity", r.two_gate_excited_fidelity},
        {"verify_closed_form_max_residual", r.verify_closed_form.max_residual},
        {"verify_composed_max_residual", r.verify_composed.max_residual},
        {"max_unitarity_defect", r.max_unitarity_defect},
        {"max_hermitian_defect", r.max_hermitian_defect},
    };
    Verdicts v;
    v.at_least("min_fidelity", r.analytic_fidelity.min_value, config.number("min_fidelity"));
    v.at_most("correction_gate_distance", r.correction_gate_distance, config.number("gate_tolerance"));
    v.at_least("two_gate_fidelity_composed", r.two_gate_fidelity_composed, 1.0 - kComposedFidelityTolerance);
    v.at_least(
        "two_gate_fidelity_closed_form", r.two_gate_fidelity_closed_form, 1.0 - config.number("fidelity_tolerance"));
    v.transform("verify_closed_form.", r.verify_closed_form);
    v.transform("verify_composed.", r.verify_composed);
    v.health(r.max_unitarity_defect, r.max_hermitian_defect);
    out.record["verdicts"] = v.to_json();
    out.record["tolerance_model"] = {
        {"dt", grid.dt()},
        {"verify_closed_form", transform_model(r.verify_closed_form)},
        {"verify_composed", transform_model(r.verify_composed)},
    };
    out.pass = v.pass();
    out.curves.push_back(curve_of("fidelity", r.analytic_fidelity));
    out.curves.push_back(curve_of("fidelity_numeric", r.numeric_fidelity));
    out.curves.push_back(curve_of("residual_closed_form", r.verify_closed_form.curve));
    out.curves.push_back(curve_of("residual_composed", r.verify_composed.curve));
    if (config.boolean("export_trace")) {
        out.trace = propagate(build_nmr(p), grid);
    }
    return out;
}

Problem annealing_problem(const ExperimentConfig &config) {
    if (config.kind() == "grover") {
        GroverProblem problem{static_cast<int>(config.integer("n_qubits")), static_cast<std::size_t>(config.integer("marked"))};
        try {
            problem.validate();
        } catch (const std::invalid_argument &e) {
            throw ConfigError(std::string("fields 'n_qubits'/'marked': ") + e.what());
        }
        return problem;
    }
    if (!config.is_null("problem_file")) {
        try {
            return IsingProblem::load(config.string("problem_file"));
        } catch (const std::exception &e) {
            throw ConfigError(std::string("field 'problem_file': ") + e.what());
        }
    }
    try {
        return IsingProblem::chain(static_cast<int>(config.integer("n_qubits")), config.number("field"), config.number("coupling"));
    } catch (const std::invalid_argument &e) {
        throw ConfigError(std::string("field 'n_qubits': ") + e.what());
    }
}

RunResult run_annealing(const ExperimentConfig &config, const RunOptions &options) {
    Problem problem = annealing_problem(config);
    double gamma0 = config.is_null("gamma0") ? default_gamma0(problem) : config.number("gamma0");
    double runtime = config.number("t_end");
    std::size_t n_steps = steps_of(config);
    Schedule gamma = annealing_schedule(config, gamma0, runtime);

    AqcOptions aqc_options;
    aqc_options.initial = config.string("initial") == "minus" ? InitialState::UniformMinus : InitialState::ExactGround;
    aqc_options.curve_stride = curve_stride(n_steps);
    AqcRunResult run = aqc_run(problem, gamma, runtime, n_steps, aqc_options);
    TimeGrid grid(0.0, runtime, n_steps);
    double hermiticity = max_hermitian_defect(build_aqc(gamma, problem), grid);
    double unitarity = run.max_unitarity_defect;

    RunResult out;
    json metrics = {
        {"n_qubits", problem_qubits(problem)},
        {"gamma0", gamma0},
        {"t_end", runtime},
        {"n_steps", n_steps},
        {"dt", grid.dt()},
        {"success_probability", run.success_probability},
        {"min_gap", run.min_gap},
        {"adiabaticity_ratio", run.adiabaticity_ratio},
        {"initial_overlap_uniform", run.initial_overlap_uniform},
        {"ground_curve", fidelity_summary(*run.ground_curve)},
    };
    if (run.final_fidelity_vs_marked) {
        metrics["final_fidelity_vs_marked"] = *run.final_fidelity_vs_marked;
    }
    Verdicts v;
    if (!config.is_null("min_success")) {
        v.at_least("success_probability", run.success_probability, config.number("min_success"));
    }
    out.curves.push_back(curve_of("ground_fidelity", *run.ground_curve));

    if (config.boolean("fast_counterpart")) {
        Schedule phi = Schedule::harmonic(2.0 * kPi * config.number("phi_cycles") / runtime);
        FastCounterpartReport fc = fast_counterpart_equivalence(problem, gamma, phi, runtime, n_steps);
        hermiticity = std::max(hermiticity, fc.max_hermitian_defect);
        unitarity = std::max(unitarity, fc.max_unitarity_defect);
        metrics["fast_counterpart"] = {
            {"phi_rate", *phi.harmonic_rate()},
            {"fidelity_closed_form", fc.fidelity_closed_form},
            {"fidelity_composed", fc.fidelity_composed},
            {"slow_success_probability", fc.slow_success_probability},
        };
        v.at_least("fast_counterpart.fidelity_closed_form", fc.fidelity_closed_form, 1.0 - config.number("fidelity_tolerance"));
        v.at_least("fast_counterpart.fidelity_composed", fc.fidelity_composed, 1.0 - kComposedFidelityTolerance);
        if (config.boolean("export_trace")) {
            out.trace = propagate(build_fast_counterpart(gamma, problem, phi), grid, {curve_stride(n_steps)});
        }
    } else if (config.boolean("export_trace")) {
        out.trace = propagate(build_aqc(gamma, problem), grid, {curve_stride(n_steps)});
    }

    auto doublings = static_cast<std::size_t>(config.integer("sweep_doublings"));
    if (doublings > 0) {
        RuntimeSweep sweep = runtime_doubling_sweep(
            problem, gamma0, runtime, doublings, config.number("sweep_dt"), config.number("sweep_threshold"), options.jobs);
        json runs = json::array();
        Curve success{"sweep_success", {}, {}};
        for (const auto &r : sweep.runs) {
            runs.push_back({{"t_end", r.runtime}, {"n_steps", r.n_steps}, {"success_probability", r.success_probability}, {"min_gap", r.min_gap}});
            success.t.push_back(r.runtime);
            success.values.push_back(r.success_probability);
            unitarity = std::max(unitarity, r.max_unitarity_defect);
        }
        metrics["sweep"] = {
            {"runs", runs},
            {"adequate_runtime", sweep.adequate_runtime ? json(*sweep.adequate_runtime) : json(nullptr)},
            {"monotonicity_violations", sweep.monotonicity_violations},
        };
        out.curves.push_back(std::move(success));
    }

    metrics["max_unitarity_defect"] = unitarity;
    metrics["max_hermitian_defect"] = hermiticity;
    v.health(unitarity, hermiticity);
    out.record["metrics"] = metrics;
    out.record["verdicts"] = v.to_json();
    out.record["tolerance_model"] = {
        {"dt", grid.dt()},
        {"integrator", "midpoint exponential, global error O(dt^2)"},
        {"composed_fidelity_tolerance", kComposedFidelityTolerance},
    };
    out.pass = v.pass();
    return out;
}

RunResult run_verify(const ExperimentConfig &config) {
    const std::string pair = config.string("pair");
    TimeGrid grid(0.0, config.number("t_end"), steps_of(config));
    NmrParams p = NmrParams::harmonic(config.number("omega0"), config.number("omega"), config.number("g"));

    std::optional<TimeDependentHamiltonian> fast, slow;
    TransformFactory make_s;
    if (pair == "aqc") {
        GroverProblem grover{static_cast<int>(config.integer("n_qubits")), static_cast<std::size_t>(config.integer("marked"))};
        try {
            grover.validate();
        } catch (const std::invalid_argument &e) {
            throw ConfigError(std::string("fields 'n_qubits'/'marked': ") + e.what());
        }
        double runtime = grid.t_end();
        Schedule gamma = default_annealing_schedule(default_gamma0(grover), runtime);
        Schedule phi = Schedule::harmonic(2.0 * kPi * config.number("phi_cycles") / runtime);
        fast.emplace(build_fast_counterpart(gamma, grover, phi));
        slow.emplace(build_aqc(gamma, grover));
        int n = grover.n_qubits;
        make_s = [n, phi](const TimeGrid &g) { return aqc_frame_transform(n, phi, g); };
    } else {
        fast.emplace(build_nmr(p));
        if (pair == "self") {
            slow.emplace(*fast);
        } else if (pair == "mismatched") {
            slow.emplace(fast->with_term(Schedule::constant(1.0), PauliString::single(0, Axis::Z), "nmr+Z"));
        } else {
            slow.emplace(build_rotating_frame(p));
        }
        if (pair == "nmr-closed-form") {
            make_s = [p](const TimeGrid &g) { return nmr_frame_transform(p, g); };
        } else if (pair == "nmr-composed") {
            make_s = [f = *fast, s = *slow](const TimeGrid &g) { return compose_s(propagate(f, g), propagate(s, g)); };
        } else {
            make_s = [](const TimeGrid &g) { return identity_transform(1, g); };
        }
    }

    TransformReport report = verify_transform(*fast, *slow, make_s, grid);
    TransformTrace s = make_s(grid);
    SampledHamiltonian back = forward_hamiltonian(effective_hamiltonian(*fast, s), s);
    double round_trip = sampled_residual(back, *fast).max_residual;
    double hermiticity = std::max(max_hermitian_defect(*fast, grid), max_hermitian_defect(*slow, grid));
    double unitarity = s.as_trace().max_unitarity_defect();

    RunResult out;
    out.record["metrics"] = {
        {"pair", pair},
        {"t_end", grid.t_end()},
        {"n_steps", grid.n_steps()},
        {"max_residual", report.max_residual},
        {"control_max_residual", report.control_max_residual},
        {"observed_order", report.observed_order},
        {"max_anti_hermitian_defect", report.curve.max_anti_hermitian_defect},
        {"inconsistent", report.curve.inconsistent},
        {"round_trip_max_residual", round_trip},
        {"transform_pass", report.pass},
        {"max_unitarity_defect", unitarity},
        {"max_hermitian_defect", hermiticity},
    };
    Verdicts v;
    v.transform("", report);
    v.at_most("round_trip_max_residual", round_trip, 2.0 * report.bound);
    v.health(unitarity, hermiticity);
    out.record["verdicts"] = v.to_json();
    out.record["tolerance_model"] = transform_model(report);
    out.pass = v.pass() && report.pass;
    out.curves.push_back(curve_of("residual", report.curve));
    if (config.boolean("export_trace")) {
        out.trace = propagate(*fast, grid);
    }
    return out;
}

RunResult run_rescale(const ExperimentConfig &config) {
    TimeScaling scaling{config.number("fast_time"), config.number("slow_time")};
    try {
        scaling.validate();
    } catch (const std::invalid_argument &e) {
        throw ConfigError(std::string("fields 'fast_time'/'slow_time': ") + e.what());
    }
    std::size_t n_steps = steps_of(config);
    auto stride = static_cast<std::size_t>(config.integer("stride"));
    if (n_steps % stride != 0) {
        throw ConfigError("field 'stride': must divide n_steps");
    }
    TimeGrid tau_grid(0.0, 1.0, n_steps);
    const double tolerance = config.number("distance_tolerance");
    const bool nmr = config.string("problem") == "nmr";

    std::optional<TimeDependentHamiltonian> h;
    if (nmr) {
        h.emplace(resonant_nmr_in_tau(config.number("drive_area"), scaling.slow_time));
    } else {
        GroverProblem grover{static_cast<int>(config.integer("n_qubits")), static_cast<std::size_t>(config.integer("marked"))};
        try {
            grover.validate();
        } catch (const std::invalid_argument &e) {
            throw ConfigError(std::string("fields 'n_qubits'/'marked': ") + e.what());
        }
        h.emplace(build_aqc(default_annealing_schedule(config.number("gamma0"), 1.0), grover));
    }
    RescaleReport r = rescale_equivalence(*h, scaling, tau_grid, stride);
    double hermiticity = max_hermitian_defect(*h, tau_grid);
    double unitarity = std::max(r.fast.max_unitarity_defect(), r.slow.max_unitarity_defect());

    RunResult out;
    json metrics = {
        {"problem", config.string("problem")},
        {"ratio", scaling.ratio()},
        {"n_steps", n_steps},
        {"max_distance", r.max_distance},
    };
    Verdicts v;
    v.at_most("max_distance", r.max_distance, tolerance);
    if (nmr) {
        // Closed form against the two analytic legs at t = tau T and t' = tau T'.
        const double area = config.number("drive_area");
        double analytic = 0.0, numeric = 0.0;
        Curve closed{"closed_form_distance", {}, {}};
        for (std::size_t i = 0; i < r.fast.size(); i++) {
            double tau = r.fast.time(i);
            DenseOperator reference = rescaled_nmr_closed_form(area, tau);
            double worst = 0.0;
            for (double time_scale : {scaling.fast_time, scaling.slow_time}) {
                NmrParams leg = NmrParams::harmonic(0.0, 2.0 * kPi / time_scale, area / time_scale);
                worst = std::max(worst, phase_aligned_distance(analytic_nmr_propagator(leg, tau * time_scale), reference).distance);
            }
            analytic = std::max(analytic, worst);
            numeric = std::max(numeric, phase_aligned_distance(r.slow.unitary(i), reference).distance);
            closed.t.push_back(tau);
            closed.values.push_back(worst);
        }
        metrics["closed_form_max_distance"] = analytic;
        metrics["numeric_vs_closed_form_max_distance"] = numeric;
        v.at_most("closed_form_max_distance", analytic, tolerance);
        out.curves.push_back(std::move(closed));
    }
    metrics["max_unitarity_defect"] = unitarity;
    metrics["max_hermitian_defect"] = hermiticity;
    v.health(unitarity, hermiticity);
    out.record["metrics"] = metrics;
    out.record["verdicts"] = v.to_json();
    out.record["tolerance_model"] = {{"dtau", tau_grid.dt()}, {"distance_tolerance", tolerance}};
    out.pass = v.pass();
    out.curves.push_back(Curve{"distance", r.taus, r.distances});
    if (config.boolean("export_trace")) {
        out.trace = r.fast;
    }
    return out;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig &config, const RunOptions &options) {
    RunResult out;
    const std::string &kind = config.kind();
    if (kind == "nmr") {
        out = run_nmr(config);
    } else if (kind == "grover" || kind == "ising") {
        out = run_annealing(config, options);
    } else if (kind == "verify-transform") {
        out = run_verify(config);
    } else {
        out = run_rescale(config);
    }
    json record;
    record["experiment"] = kind;
    record["hamxform_version"] = HAMXFORM_VERSION;
    record["timestamp"] = options.timestamp;
    record["config"] = config.to_json();
    record["metrics"] = std::move(out.record["metrics"]);
    record["verdicts"] = std::move(out.record["verdicts"]);
    record["tolerance_model"] = std::move(out.record["tolerance_model"]);
    json files = json::array();
    if (config.boolean("write_curves")) {
        for (const auto &c : out.curves) {
            files.push_back(c.name + ".csv");
        }
    }
    record["curves"] = files;
    record["pass"] = out.pass;
    out.record = std::move(record);
    return out;
}

void write_outputs(const RunResult &result, const ExperimentConfig &config, const std::filesystem::path &out_dir) {
    std::filesystem::create_directories(out_dir);
    auto open = [](const std::filesystem::path &path) {
        std::ofstream file(path);
        if (!file) {
            throw std::runtime_error("cannot write '" + path.string() + "'");
        }
        return file;
    };
    {
        auto file = open(out_dir / "result.json");
        file << result.record.dump(2) << "\n";
    }
    if (config.boolean("write_curves")) {
        for (const auto &curve : result.curves) {
            auto file = open(out_dir / (curve.name + ".csv"));
            file.precision(17);
            file << "t,value\n";
            for (std::size_t i = 0; i < curve.t.size(); i++) {
                file << curve.t[i] << "," << curve.values[i] << "\n";
            }
        }
    }
    if (result.trace) {
        auto file = open(out_dir / "trace.txt");
        write_trace(file, *result.trace);
    }
}

std::string utc_timestamp() {
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buffer;
}

}  // namespace hamxform
