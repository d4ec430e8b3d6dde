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

#include "hamxform/adiabatic.h"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hamxform {

namespace {

// Orthonormal basis of the eigen-cluster [first, last).
DenseOperator cluster_basis(const Eigensystem &es, std::pair<Eigen::Index, Eigen::Index> range) {
    return es.states.middleCols(range.first, range.second - range.first);
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters(const Eigensystem &es) {
    std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
    Eigen::Index k = 0;
    while (k < es.energies.size()) {
        auto range = es.cluster(k);
        out.push_back(range);
        k = range.second;
    }
    return out;
}

double projection_weight(const DenseOperator &basis, const StateVector &psi) {
    return (basis.adjoint() * psi).squaredNorm();
}

// Gap between the ground cluster and the next level.
double ground_gap(const Eigensystem &es) {
    auto range = es.cluster(0);
    if (range.second >= es.energies.size()) {
        return 0.0;
    }
    return es.energies(range.second) - es.energies(0);
}

}  // namespace

FidelityCurve track_ground_state(
    const TimeDependentHamiltonian &h, const PropagatorTrace &trace, const StateVector &psi0, Eigen::Index branch) {
    if (psi0.size() != h.dim() || trace.dim() != h.dim()) {
        throw std::invalid_argument("track_ground_state: dimension mismatch");
    }
    if (branch < 0 || branch >= h.dim()) {
        throw std::invalid_argument("track_ground_state: branch index out of range");
    }
    FidelityCurve curve;
    curve.times.reserve(trace.size());
    curve.values.reserve(trace.size());
    // Reference branch for the overlap test. It is not replaced by a merged cluster at a
    // crossing node, so the branch is picked up again on the far side.
    DenseOperator reference;
    for (std::size_t i = 0; i < trace.size(); i++) {
        double t = trace.time(i);
        Eigensystem es = instantaneous_eigensystem(h, t);
        DenseOperator basis;
        if (i == 0) {
            basis = cluster_basis(es, es.cluster(branch));
        } else {
            double best = -1.0;
            for (const auto &range : clusters(es)) {
                DenseOperator candidate = cluster_basis(es, range);
                double score = (candidate.adjoint() * reference).squaredNorm() / static_cast<double>(reference.cols());
                if (score > best) {
                    best = score;
                    basis = std::move(candidate);
                }
            }
            if (best < 0.5) {
                std::ostringstream msg;
                msg.precision(17);
                msg << "branch tracking lost at t=" << t << " (best overlap " << best << ")";
                curve.truncated = true;
                curve.diagnostic = msg.str();
                break;
            }
        }
        StateVector psi = trace.unitary(i) * psi0;
        double f = projection_weight(basis, psi);
        curve.times.push_back(t);
        curve.values.push_back(f);
        curve.min_value = std::min(curve.min_value, f);
        if (i == 0 || basis.cols() <= reference.cols()) {
            reference = std::move(basis);
        }
    }
    return curve;
}

double nmr_ground_fidelity(double g, double detuning, double t) {
    double kappa = std::sqrt(g * g + 0.25 * detuning * detuning);
    double s = std::sin(kappa * t);
    return 1.0 - detuning * detuning / (4.0 * kappa * kappa) * s * s;
}

double nmr_fidelity_floor(double g, double detuning) {
    return 1.0 - detuning * detuning / (4.0 * g * g + detuning * detuning);
}

double max_hermitian_defect(const TimeDependentHamiltonian &h, const TimeGrid &grid, std::size_t samples) {
    double worst = 0.0;
    samples = std::max<std::size_t>(samples, 2);
    for (std::size_t j = 0; j < samples; j++) {
        double t = grid.t_start() + (grid.t_end() - grid.t_start()) * static_cast<double>(j) /
                                        static_cast<double>(samples - 1);
        worst = std::max(worst, hermitian_defect(h.eval(t)));
    }
    return worst;
}

NmrReport nmr_hidden_adiabaticity(const NmrParams &p, const TimeGrid &grid) {
    if (!p.is_harmonic()) {
        throw std::invalid_argument("nmr_hidden_adiabaticity: needs phi = omega t and constant omega0");
    }
    // The closed forms need theta = Omega t; enforce it.
    NmrParams params = NmrParams::harmonic(*p.omega0.constant_value(), p.omega(), p.g);
    NmrReport report;
    report.g = params.g;
    report.detuning = params.detuning();
    report.adiabaticity_ratio =
        report.detuning != 0.0 ? params.g / std::abs(report.detuning) : std::numeric_limits<double>::infinity();
    report.final_time = grid.t_end();
    report.fidelity_floor = nmr_fidelity_floor(params.g, report.detuning);

    TimeDependentHamiltonian fast = build_nmr(params);
    TimeDependentHamiltonian slow = build_rotating_frame(params);

    PropagatorTrace fast_analytic =
        sample_trace(grid, [&](double t) { return analytic_nmr_propagator(params, t); }, "nmr analytic");
    PropagatorTrace slow_analytic =
        sample_trace(grid, [&](double t) { return analytic_slow_propagator(params, t); }, "rotating analytic");
    PropagatorTrace fast_numeric = propagate(fast, grid);
    PropagatorTrace slow_numeric = propagate(slow, grid);

    TransformTrace closed = nmr_frame_transform(params, grid);
    TransformTrace composed_analytic = compose_s(fast_analytic, slow_analytic);
    TransformTrace composed_numeric = compose_s(fast_numeric, slow_numeric);
    for (std::size_t i = 0; i < closed.size(); i++) {
        report.s_closed_vs_composed_analytic = std::max(
            report.s_closed_vs_composed_analytic,
            phase_aligned_distance(composed_analytic.value(i), closed.value(i)).distance);
        report.s_closed_vs_composed_numeric = std::max(
            report.s_closed_vs_composed_numeric,
            phase_aligned_distance(composed_numeric.value(i), closed.value(i)).distance);
        report.fast_propagator_error = std::max(
            report.fast_propagator_error,
            phase_aligned_distance(fast_numeric.unitary(i), fast_analytic.unitary(i)).distance);
    }

    report.verify_closed_form =
        verify_transform(fast, slow, [&](const TimeGrid &g) { return nmr_frame_transform(params, g); }, grid);
    report.verify_composed = verify_transform(
        fast, slow, [&](const TimeGrid &g) { return compose_s(propagate(fast, g), propagate(slow, g)); }, grid);

    StateVector minus = minus_state(1);
    StateVector plus = plus_state(1);
    report.analytic_fidelity = track_ground_state(slow, slow_analytic, minus);
    report.numeric_fidelity = track_ground_state(slow, slow_numeric, minus);
    report.analytic_fidelity.adiabaticity_ratio = report.adiabaticity_ratio;
    report.numeric_fidelity.adiabaticity_ratio = report.adiabaticity_ratio;
    for (std::size_t k = 0; k < report.analytic_fidelity.values.size(); k++) {
        double expected = nmr_ground_fidelity(params.g, report.detuning, report.analytic_fidelity.times[k]);
        report.fidelity_closed_form_error =
            std::max(report.fidelity_closed_form_error, std::abs(report.analytic_fidelity.values[k] - expected));
    }

    double t_final = grid.t_end();
    double omega0 = *params.omega0.constant_value();
    DenseOperator correction = herm_expm(pauli_matrix(Axis::Z), -0.5 * omega0 * t_final);
    report.correction_gate_distance =
        phase_aligned_distance(composed_analytic.at(t_final).adjoint(), correction).distance;

    StateVector slow_final = apply(slow_numeric, minus, t_final);
    report.two_gate_fidelity_composed =
        fidelity(two_gate_realize(fast_numeric, composed_numeric, minus, t_final), slow_final);
    report.two_gate_fidelity_closed_form =
        fidelity(two_gate_realize(fast_numeric, closed, minus, t_final), slow_final);

    Eigensystem final_es = instantaneous_eigensystem(slow, t_final);
    report.two_gate_ground_fidelity =
        fidelity(two_gate_realize(fast_analytic, composed_analytic, minus, t_final), final_es.state(0));
    report.two_gate_excited_fidelity =
        fidelity(two_gate_realize(fast_analytic, composed_analytic, plus, t_final), final_es.state(1));

    report.max_unitarity_defect = std::max(
        {fast_numeric.max_unitarity_defect(), slow_numeric.max_unitarity_defect(),
         fast_analytic.max_unitarity_defect(), slow_analytic.max_unitarity_defect(),
         composed_numeric.as_trace().max_unitarity_defect(), closed.as_trace().max_unitarity_defect()});
    report.max_hermitian_defect = std::max(max_hermitian_defect(fast, grid), max_hermitian_defect(slow, grid));
    return report;
}

Schedule default_annealing_schedule(double gamma0, double runtime) {
    return Schedule::linear_ramp(gamma0, 0.0, runtime);
}

namespace {

StateVector initial_state(const TimeDependentHamiltonian &h, InitialState kind, double t0) {
    if (kind == InitialState::UniformMinus) {
        return minus_state(h.n_qubits());
    }
    return instantaneous_eigensystem(h, t0).state(0);
}

}  // namespace

AqcRunResult aqc_run(
    const Problem &problem, const Schedule &gamma, double runtime, std::size_t n_steps, AqcOptions options) {
    TimeDependentHamiltonian h = build_aqc(gamma, problem);
    TimeGrid grid(0.0, runtime, n_steps);
    AqcRunResult result;
    result.runtime = runtime;
    result.n_steps = n_steps;

    StateVector psi0 = initial_state(h, options.initial, 0.0);
    int n = h.n_qubits();
    result.initial_overlap_uniform = std::norm(minus_state(n).dot(psi0));

    PropagatorTrace trace = propagate(h, grid, {options.curve_stride > 0 ? options.curve_stride : n_steps});
    result.max_unitarity_defect = trace.max_unitarity_defect();
    StateVector psi = trace.final() * psi0;
    if (options.curve_stride > 0) {
        result.ground_curve = track_ground_state(h, trace, psi0);
    }

    Eigensystem final_es = instantaneous_eigensystem(h, runtime);
    result.success_probability = projection_weight(cluster_basis(final_es, final_es.cluster(0)), psi);
    if (const auto *grover = std::get_if<GroverProblem>(&problem)) {
        result.final_fidelity_vs_marked = std::norm(psi(static_cast<Eigen::Index>(grover->marked)));
    }

    result.min_gap = std::numeric_limits<double>::infinity();
    std::size_t samples = std::max<std::size_t>(options.gap_samples, 2);
    for (std::size_t j = 0; j < samples; j++) {
        double t = runtime * static_cast<double>(j) / static_cast<double>(samples - 1);
        result.min_gap = std::min(result.min_gap, ground_gap(instantaneous_eigensystem(h, t)));
    }
    result.adiabaticity_ratio = result.min_gap * result.min_gap * runtime;
    if (result.ground_curve) {
        result.ground_curve->adiabaticity_ratio = result.adiabaticity_ratio;
    }
    return result;
}

AqcRunResult grover_aqc_run(
    int n_qubits, std::size_t marked, double gamma0, double runtime, std::size_t n_steps, AqcOptions options) {
    GroverProblem problem{n_qubits, marked};
    problem.validate();
    return aqc_run(problem, default_annealing_schedule(gamma0, runtime), runtime, n_steps, options);
}

RuntimeSweep runtime_doubling_sweep(
    const Problem &problem, double gamma0, double initial_runtime, std::size_t doublings, double dt,
    double threshold, std::size_t jobs) {
    if (!(initial_runtime > 0.0) || !(dt > 0.0)) {
        throw std::invalid_argument("runtime_doubling_sweep: runtime and dt must be positive");
    }
    jobs = std::max<std::size_t>(jobs, 1);
    std::vector<double> runtimes;
    for (std::size_t k = 0; k <= doublings; k++) {
        runtimes.push_back(initial_runtime * std::ldexp(1.0, static_cast<int>(k)));
    }
    RuntimeSweep sweep;
    sweep.runs.resize(runtimes.size());
    auto run_one = [&](std::size_t k) {
        double runtime = runtimes[k];
        auto n_steps = static_cast<std::size_t>(std::ceil(runtime / dt - 1e-9));
        return aqc_run(problem, default_annealing_schedule(gamma0, runtime), runtime, std::max<std::size_t>(n_steps, 1));
    };
    for (std::size_t start = 0; start < runtimes.size(); start += jobs) {
        std::vector<std::future<AqcRunResult>> batch;
        for (std::size_t k = start; k < std::min(runtimes.size(), start + jobs); k++) {
            batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred, run_one, k));
        }
        for (std::size_t j = 0; j < batch.size(); j++) {
            sweep.runs[start + j] = batch[j].get();
        }
    }
    for (std::size_t k = 0; k < sweep.runs.size(); k++) {
        if (!sweep.adequate_runtime && sweep.runs[k].success_probability >= threshold) {
            sweep.adequate_runtime = sweep.runs[k].runtime;
        }
        if (k > 0 && sweep.runs[k].success_probability < sweep.runs[k - 1].success_probability) {
            sweep.monotonicity_violations.push_back(k);
        }
    }
    return sweep;
}

namespace {

struct EquivalenceLeg {
    double fidelity_closed_form;
    double fidelity_composed;
    double slow_success;
    double max_unitarity_defect;
};

EquivalenceLeg equivalence_at(
    const TimeDependentHamiltonian &fast, const TimeDependentHamiltonian &slow, const Schedule &phi,
    const TimeGrid &grid) {
    const std::size_t stride = grid.n_steps();
    PropagatorTrace fast_trace = propagate(fast, grid, {stride});
    PropagatorTrace slow_trace = propagate(slow, grid, {stride});
    StateVector psi0 = instantaneous_eigensystem(slow, grid.t_start()).state(0);
    double t_final = grid.t_end();

    StateVector slow_final = apply(slow_trace, psi0, t_final);
    TransformTrace closed = aqc_frame_transform(slow.n_qubits(), phi, grid, stride);
    TransformTrace composed = compose_s(fast_trace, slow_trace);

    Eigensystem final_es = instantaneous_eigensystem(slow, t_final);
    EquivalenceLeg leg{};
    leg.fidelity_closed_form = fidelity(two_gate_realize(fast_trace, closed, psi0, t_final), slow_final);
    leg.fidelity_composed = fidelity(two_gate_realize(fast_trace, composed, psi0, t_final), slow_final);
    leg.slow_success = projection_weight(cluster_basis(final_es, final_es.cluster(0)), slow_final);
    leg.max_unitarity_defect = std::max(
        {fast_trace.max_unitarity_defect(), slow_trace.max_unitarity_defect(),
         composed.as_trace().max_unitarity_defect(), closed.as_trace().max_unitarity_defect()});
    return leg;
}

}  // namespace

FastCounterpartReport fast_counterpart_equivalence(
    const Problem &problem, const Schedule &gamma, const Schedule &phi, double runtime, std::size_t n_steps,
    bool refinement_control) {
    if (std::abs(phi.eval(0.0)) > 1e-15) {
        throw std::invalid_argument("fast_counterpart_equivalence: the frame phase must start at phi(0) = 0");
    }
    TimeDependentHamiltonian slow = build_aqc(gamma, problem);
    TimeDependentHamiltonian fast = build_fast_counterpart(gamma, problem, phi);
    TimeGrid grid(0.0, runtime, n_steps);

    FastCounterpartReport report;
    EquivalenceLeg leg = equivalence_at(fast, slow, phi, grid);
    report.fidelity_closed_form = leg.fidelity_closed_form;
    report.fidelity_composed = leg.fidelity_composed;
    report.slow_success_probability = leg.slow_success;
    report.max_unitarity_defect = leg.max_unitarity_defect;
    report.max_hermitian_defect = std::max(max_hermitian_defect(fast, grid), max_hermitian_defect(slow, grid));

    if (refinement_control) {
        EquivalenceLeg fine = equivalence_at(fast, slow, phi, grid.refined(2));
        report.control_infidelity = 1.0 - fine.fidelity_closed_form;
        report.max_unitarity_defect = std::max(report.max_unitarity_defect, fine.max_unitarity_defect);
        double coarse_infidelity = 1.0 - leg.fidelity_closed_form;
        if (coarse_infidelity > 0.0 && *report.control_infidelity > 0.0) {
            // Infidelity is quadratic in the state error.
            report.observed_order = 0.5 * std::log2(coarse_infidelity / *report.control_infidelity);
        }
    }
    return report;
}

}  // namespace hamxform
