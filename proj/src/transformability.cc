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

#include "hamxform/transformability.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace hamxform {

namespace {

constexpr Complex kI{0.0, 1.0};

PropagatorTrace checked_transform(PropagatorTrace ops, TransformProvenance provenance) {
    const auto &s0 = ops.unitary(0);
    double origin = (s0 - DenseOperator::Identity(s0.rows(), s0.cols())).norm();
    if (provenance == TransformProvenance::Composed && !(origin <= 1e-12)) {
        std::ostringstream msg;
        msg << "transform '" << ops.label() << "' does not start at the identity (||S(t0) - I|| = " << origin << ")";
        throw std::invalid_argument(msg.str());
    }
    for (std::size_t i = 0; i < ops.size(); i++) {
        require_unitary(ops.unitary(i), "transform '" + ops.label() + "' node " + std::to_string(i));
    }
    return ops;
}

}  // namespace

TransformTrace::TransformTrace(
    TimeGrid grid, std::size_t stride, std::vector<DenseOperator> values, TransformProvenance provenance,
    std::string label)
    : ops_(checked_transform(PropagatorTrace(grid, stride, std::move(values), std::move(label)), provenance)),
      provenance_(provenance) {}

TransformTrace compose_s(const PropagatorTrace &fast, const PropagatorTrace &slow) {
    if (!(fast.grid() == slow.grid()) || fast.stride() != slow.stride()) {
        throw std::invalid_argument("compose_s: traces live on different grids");
    }
    if (fast.dim() != slow.dim()) {
        throw std::invalid_argument("compose_s: traces have different dimensions");
    }
    std::vector<DenseOperator> values;
    values.reserve(fast.size());
    for (std::size_t i = 0; i < fast.size(); i++) {
        values.push_back(fast.unitary(i) * slow.unitary(i).adjoint());
    }
    return TransformTrace(
        fast.grid(), fast.stride(), std::move(values), TransformProvenance::Composed,
        "U[" + fast.label() + "] u[" + slow.label() + "]^dagger");
}

TransformTrace closed_form_transform(
    const TimeGrid &grid, const std::function<DenseOperator(double)> &s_at, std::string label, std::size_t stride) {
    auto sampled = sample_trace(grid, s_at, label, stride);
    return TransformTrace(
        grid, stride, std::vector<DenseOperator>(sampled.unitaries()), TransformProvenance::ClosedForm,
        std::move(label));
}

TransformTrace identity_transform(int n_qubits, const TimeGrid &grid, std::size_t stride) {
    require_qubit_count(n_qubits);
    auto dim = Eigen::Index{1} << n_qubits;
    return closed_form_transform(
        grid, [dim](double) { return DenseOperator::Identity(dim, dim).eval(); }, "identity", stride);
}

TransformTrace nmr_frame_transform(const NmrParams &p, const TimeGrid &grid, std::size_t stride) {
    DenseOperator z = pauli_matrix(Axis::Z);
    return closed_form_transform(
        grid,
        [&](double t) {
            // exp(i a Z / 2) = herm_expm(Z, -a / 2).
            return herm_expm(z, -0.5 * (p.theta.eval(t) - p.phi.eval(t)));
        },
        "exp(i(theta-phi)Z/2)", stride);
}

TransformTrace aqc_frame_transform(int n_qubits, const Schedule &phi, const TimeGrid &grid, std::size_t stride) {
    require_qubit_count(n_qubits);
    auto dim = Eigen::Index{1} << n_qubits;
    DenseOperator x_sum = DenseOperator::Zero(dim, dim);
    for (int q = 0; q < n_qubits; q++) {
        accumulate(x_sum, PauliString::single(q, Axis::X), n_qubits);
    }
    return closed_form_transform(
        grid, [&](double t) { return herm_expm(x_sum, phi.eval(t)); }, "prod_i exp(-i phi X_i)", stride);
}

double SampledHamiltonian::max_anti_hermitian_defect() const {
    double worst = 0.0;
    for (double d : anti_hermitian_defect) {
        worst = std::max(worst, d);
    }
    return worst;
}

namespace {

enum class Direction { ToSlow, ToFast };

// Central-difference derivative of the stored S at interior index i.
DenseOperator s_dot(const TransformTrace &s, std::size_t i) {
    return (s.value(i + 1) - s.value(i - 1)) / (2.0 * s.stored_dt());
}

// Median over nodes of the third-difference estimate of ||S'''||, so that an isolated
// kink in S does not inflate its own bound.
double third_derivative_bound(const TransformTrace &s) {
    const double dt = s.stored_dt();
    std::vector<double> norms;
    for (std::size_t i = 2; i + 2 < s.size(); i++) {
        DenseOperator d3 = (s.value(i + 2) - 2.0 * s.value(i + 1) + 2.0 * s.value(i - 1) - s.value(i - 2)) /
                           (2.0 * dt * dt * dt);
        norms.push_back(d3.norm());
    }
    if (norms.empty()) {
        return 0.0;
    }
    auto mid = norms.begin() + static_cast<std::ptrdiff_t>(norms.size() / 2);
    std::nth_element(norms.begin(), mid, norms.end());
    return dt * dt / 6.0 * *mid;
}

SampledHamiltonian transform_samples(
    const TransformTrace &s, Direction direction, const std::function<DenseOperator(std::size_t, double)> &source) {
    if (s.size() < 3) {
        throw std::invalid_argument("transform needs at least three stored nodes for central differences");
    }
    SampledHamiltonian out;
    const std::size_t interior = s.size() - 2;
    out.times.reserve(interior);
    out.nodes.reserve(interior);
    out.values.reserve(interior);
    out.anti_hermitian_defect.reserve(interior);
    for (std::size_t i = 1; i + 1 < s.size(); i++) {
        double t = s.time(i);
        const DenseOperator &sk = s.value(i);
        DenseOperator ds = s_dot(s, i);
        DenseOperator h = source(i, t);
        if (h.rows() != sk.rows()) {
            throw std::invalid_argument("transform and Hamiltonian dimensions differ");
        }
        DenseOperator out_h;
        if (direction == Direction::ToSlow) {
            out_h = sk.adjoint() * h * sk - kI * (sk.adjoint() * ds);
        } else {
            out_h = sk * h * sk.adjoint() - kI * (sk * ds.adjoint());
        }
        DenseOperator anti = 0.5 * (out_h - out_h.adjoint());
        out.times.push_back(t);
        out.nodes.push_back(i);
        out.anti_hermitian_defect.push_back(anti.norm());
        out.values.push_back(0.5 * (out_h + out_h.adjoint()));
    }
    out.model_bound = third_derivative_bound(s);
    double floor = kResidualFloor + 1e-14 * std::sqrt(static_cast<double>(s.dim())) / s.stored_dt();
    out.inconsistent = out.max_anti_hermitian_defect() > 10.0 * out.model_bound + floor;
    return out;
}

std::function<DenseOperator(std::size_t, double)> from_sampled(const SampledHamiltonian &h, const TransformTrace &s) {
    if (h.nodes.size() != s.size() - 2) {
        throw std::invalid_argument("sampled Hamiltonian does not cover the transform's interior nodes");
    }
    return [&h](std::size_t i, double) -> DenseOperator { return h.values.at(i - 1); };
}

}  // namespace

SampledHamiltonian effective_hamiltonian(const TimeDependentHamiltonian &fast, const TransformTrace &s) {
    return transform_samples(s, Direction::ToSlow, [&](std::size_t, double t) { return fast.eval(t); });
}

SampledHamiltonian effective_hamiltonian(const SampledHamiltonian &fast, const TransformTrace &s) {
    return transform_samples(s, Direction::ToSlow, from_sampled(fast, s));
}

SampledHamiltonian forward_hamiltonian(const TimeDependentHamiltonian &slow, const TransformTrace &s) {
    return transform_samples(s, Direction::ToFast, [&](std::size_t, double t) { return slow.eval(t); });
}

SampledHamiltonian forward_hamiltonian(const SampledHamiltonian &slow, const TransformTrace &s) {
    return transform_samples(s, Direction::ToFast, from_sampled(slow, s));
}

ResidualCurve sampled_residual(const SampledHamiltonian &sampled, const TimeDependentHamiltonian &reference) {
    ResidualCurve curve;
    curve.times = sampled.times;
    curve.values.reserve(sampled.values.size());
    for (std::size_t k = 0; k < sampled.values.size(); k++) {
        double r = (sampled.values[k] - reference.eval(sampled.times[k])).norm();
        curve.values.push_back(r);
        curve.max_residual = std::max(curve.max_residual, r);
    }
    curve.max_anti_hermitian_defect = sampled.max_anti_hermitian_defect();
    curve.inconsistent = sampled.inconsistent;
    return curve;
}

ResidualCurve residual_curve(
    const TimeDependentHamiltonian &fast, const TimeDependentHamiltonian &slow, const TransformTrace &s) {
    return sampled_residual(effective_hamiltonian(fast, s), slow);
}

TransformReport verify_transform(
    const TimeDependentHamiltonian &fast, const TimeDependentHamiltonian &slow, const TransformFactory &make_s,
    const TimeGrid &grid) {
    TransformReport report;
    TransformTrace s = make_s(grid);
    report.curve = residual_curve(fast, slow, s);
    report.max_residual = report.curve.max_residual;
    report.fd_step = s.stored_dt();

    TransformTrace control = make_s(grid.refined(2));
    report.control_max_residual = residual_curve(fast, slow, control).max_residual;

    double fine_dt = control.stored_dt();
    report.model_constant = report.control_max_residual / (fine_dt * fine_dt);
    report.bound = (1.0 + kModelSlack) * report.model_constant * report.fd_step * report.fd_step + kResidualFloor;
    report.observed_order = report.control_max_residual > 0.0
                                ? std::log2(report.max_residual / report.control_max_residual)
                                : (report.max_residual > 0.0 ? INFINITY : 0.0);
    if (report.max_residual <= kResidualFloor) {
        report.pass = true;
    } else {
        report.pass = report.max_residual <= report.bound && report.observed_order >= 1.8;
    }
    return report;
}

StateVector two_gate_realize(
    const PropagatorTrace &fast, const TransformTrace &s, const StateVector &psi0, double t_final) {
    StateVector evolved = apply(fast, psi0, t_final, true);
    return s.at(t_final, true).adjoint() * evolved;
}

void TimeScaling::validate() const {
    if (!(fast_time > 0.0) || !(slow_time >= fast_time) || !std::isfinite(slow_time)) {
        throw std::invalid_argument("TimeScaling: need 0 < T <= T' (the slow process has the longer time)");
    }
}

RescaleReport rescale_equivalence(
    const TimeDependentHamiltonian &slow_in_tau, const TimeScaling &scaling, const TimeGrid &tau_grid,
    std::size_t stride) {
    scaling.validate();
    TimeDependentHamiltonian fast = slow_in_tau.scaled(scaling.ratio());
    PropagateOptions options{stride};
    PropagatorTrace fast_trace = propagate(fast.scaled(scaling.fast_time), tau_grid, options);
    PropagatorTrace slow_trace = propagate(slow_in_tau.scaled(scaling.slow_time), tau_grid, options);
    RescaleReport report{0.0, {}, {}, fast_trace, slow_trace};
    report.taus.reserve(fast_trace.size());
    report.distances.reserve(fast_trace.size());
    for (std::size_t i = 0; i < fast_trace.size(); i++) {
        double d = phase_aligned_distance(fast_trace.unitary(i), slow_trace.unitary(i)).distance;
        report.taus.push_back(fast_trace.time(i));
        report.distances.push_back(d);
        report.max_distance = std::max(report.max_distance, d);
    }
    return report;
}

DenseOperator rescaled_nmr_closed_form(double drive_area, double tau) {
    constexpr double pi = std::numbers::pi;
    DenseOperator z = pauli_matrix(Axis::Z);
    DenseOperator generator = drive_area * pauli_matrix(Axis::X) - pi * z;
    return herm_expm(z, pi * tau) * herm_expm(generator, tau);
}

TimeDependentHamiltonian resonant_nmr_in_tau(double drive_area, double reference_time) {
    if (!(reference_time > 0.0)) {
        throw std::invalid_argument("resonant_nmr_in_tau: reference time must be positive");
    }
    return build_nmr(NmrParams::harmonic(0.0, 2.0 * std::numbers::pi, drive_area / reference_time));
}

}  // namespace hamxform
