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

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "testing/oracles.h"

using namespace hamxform;

namespace {

constexpr double kPi = std::numbers::pi;

// 2x2 oracle for the slow NMR evolution of |->: u(t) from the Taylor exponentials,
// ground state of g(X cos Omega t + Y sin Omega t) written out by hand.
double oracle_ground_fidelity(double g, double detuning, double t) {
    using hamxform::testing::kron_string;
    using hamxform::testing::taylor_expm;
    DenseOperator z = kron_string("Z"), x = kron_string("X");
    DenseOperator u = taylor_expm(z, detuning * t / 2) * taylor_expm(2 * g * x - detuning * z, t / 2);
    StateVector minus(2);
    minus << 1 / std::sqrt(2.0), -1 / std::sqrt(2.0);
    StateVector ground(2);
    ground << std::exp(Complex(0, -detuning * t / 2)) / std::sqrt(2.0),
        -std::exp(Complex(0, detuning * t / 2)) / std::sqrt(2.0);
    return std::norm(ground.dot(u * minus));
}

}  // namespace

TEST(adiabatic, closed_form_fidelity) {
    for (double t : {0.0, 0.13, 0.7, 2.2}) {
        EXPECT_NEAR(nmr_ground_fidelity(3.0, 1.4, t), oracle_ground_fidelity(3.0, 1.4, t), 1e-12) << t;
    }
    EXPECT_NEAR(nmr_fidelity_floor(25.0, 1.0), 0.99960016, 1e-8);
    EXPECT_DOUBLE_EQ(nmr_fidelity_floor(2.0, 0.0), 1.0);
    // Deficit scales as (Omega / 2g)^2 for g >> Omega.
    double ratio = (1 - nmr_fidelity_floor(25.0, 1.0)) / (1 - nmr_fidelity_floor(50.0, 1.0));
    EXPECT_NEAR(ratio, 4.0, 0.1);
}

TEST(adiabatic, stationary_state_keeps_unit_fidelity) {
    auto h = build_aqc(Schedule::constant(0.7), IsingProblem::chain(3, 0.5, -1.0));
    auto trace = propagate(h, TimeGrid(0.0, 2.0, 50));
    auto ground = instantaneous_eigensystem(h, 0.0).state(0);
    auto curve = track_ground_state(h, trace, ground);
    ASSERT_EQ(curve.values.size(), 51u);
    for (double f : curve.values) {
        EXPECT_NEAR(f, 1.0, 1e-12);
    }
    EXPECT_FALSE(curve.truncated);
}

TEST(adiabatic, nmr_slow_curve_matches_closed_form) {
    const double g = 25.0, detuning = 1.0;
    auto p = NmrParams::harmonic(0.5, 0.5 + detuning, g);
    TimeGrid grid(0.0, 2 * kPi, 2000);
    auto trace = sample_trace(grid, [&](double t) { return analytic_slow_propagator(p, t); }, "slow");
    auto curve = track_ground_state(build_rotating_frame(p), trace, minus_state(1));
    double worst = 0;
    for (std::size_t k = 0; k < curve.values.size(); k++) {
        worst = std::max(worst, std::abs(curve.values[k] - nmr_ground_fidelity(g, detuning, curve.times[k])));
    }
    EXPECT_LE(worst, 1e-9);
    EXPECT_GE(curve.min_value, 0.999);
    EXPECT_NEAR(curve.min_value, nmr_fidelity_floor(g, detuning), 1e-6);
}

TEST(adiabatic, tracking_follows_branches_through_a_crossing) {
    // H = (1 - 2t/T) Z crosses zero at T/2; the |0> branch goes from ground to excited.
    TimeDependentHamiltonian h(
        1, {{Schedule::linear_ramp(-1.0, 1.0, 2.0), PauliString::single(0, Axis::Z)}}, {}, "crossing");
    TimeGrid grid(0.0, 2.0, 40);
    auto trace = propagate(h, grid);
    auto curve = track_ground_state(h, trace, basis_state(1, 0));
    // At the crossing node the two levels merge into one cluster; elsewhere |0> stays on its branch.
    EXPECT_FALSE(curve.truncated) << curve.diagnostic;
    ASSERT_EQ(curve.values.size(), 41u);
    for (double f : curve.values) {
        EXPECT_NEAR(f, 1.0, 1e-12);
    }
}

TEST(adiabatic, tracking_truncates_when_the_branch_is_lost) {
    // One step from -sum Z to -sum X: |000> spreads over several clusters of the new spectrum.
    std::vector<HamiltonianTerm> terms;
    for (int q = 0; q < 3; q++) {
        terms.push_back({Schedule::linear_ramp(-1.0, 0.0, 1.0), PauliString::single(q, Axis::Z)});
        terms.push_back({Schedule::linear_ramp(0.0, -1.0, 1.0), PauliString::single(q, Axis::X)});
    }
    TimeDependentHamiltonian h(3, terms, {}, "jump");
    auto trace = propagate(h, TimeGrid(0.0, 1.0, 1));
    auto curve = track_ground_state(h, trace, basis_state(3, 0));
    EXPECT_TRUE(curve.truncated);
    EXPECT_EQ(curve.values.size(), 1u);
    EXPECT_NE(curve.diagnostic.find("t=1"), std::string::npos) << curve.diagnostic;
}

TEST(adiabatic, tracking_rejects_bad_inputs) {
    auto h = build_nmr(NmrParams::harmonic(1.0, 1.5, 2.0));
    auto trace = propagate(h, TimeGrid(0.0, 1.0, 10));
    EXPECT_THROW(track_ground_state(h, trace, minus_state(2)), std::invalid_argument);
    EXPECT_THROW(track_ground_state(h, trace, minus_state(1), 2), std::invalid_argument);
}

TEST(adiabatic, nmr_report) {
    const double omega0 = 1.0, detuning = 1.0, g = 25.0;
    auto p = NmrParams::harmonic(omega0, omega0 + detuning, g);
    double t_final = kPi / (2 * detuning);
    auto report = nmr_hidden_adiabaticity(p, TimeGrid(0.0, t_final, 2000));
    EXPECT_EQ(report.adiabaticity_ratio, 25.0);
    EXPECT_LE(report.s_closed_vs_composed_analytic, 1e-8);
    EXPECT_LE(report.correction_gate_distance, 1e-8);
    EXPECT_GE(report.analytic_fidelity.min_value, 0.999);
    EXPECT_LE(report.fidelity_closed_form_error, 1e-9);
    EXPECT_GE(report.two_gate_fidelity_composed, 1 - 1e-12);
    EXPECT_GE(report.two_gate_fidelity_closed_form, 1 - 1e-6);
    EXPECT_GE(report.two_gate_ground_fidelity, report.fidelity_floor - 1e-12);
    EXPECT_GE(report.two_gate_excited_fidelity, report.fidelity_floor - 1e-12);
    EXPECT_TRUE(report.verify_closed_form.pass);
    EXPECT_TRUE(report.verify_composed.pass);
    EXPECT_LE(report.max_unitarity_defect, 1e-10);
    EXPECT_LE(report.max_hermitian_defect, 1e-12);

    // The correction gate at T = pi / (2 Omega) in closed form.
    DenseOperator expected = hamxform::testing::taylor_expm(
        hamxform::testing::kron_string("Z"), -kPi * omega0 / (4 * detuning));
    DenseOperator composed_gate =
        (analytic_nmr_propagator(p, t_final) * analytic_slow_propagator(p, t_final).adjoint()).adjoint();
    EXPECT_LE(phase_aligned_distance(composed_gate, expected).distance, 1e-12);
}

TEST(adiabatic, nmr_report_without_splitting) {
    auto p = NmrParams::harmonic(0.0, 1.2, 2.0);
    auto report = nmr_hidden_adiabaticity(p, TimeGrid(0.0, 3.0, 300));
    EXPECT_LE(report.s_closed_vs_composed_analytic, 1e-12);
    // omega0 = 0: S is the identity up to phase.
    EXPECT_LE(report.correction_gate_distance, 1e-12);
    EXPECT_NEAR(report.detuning, 1.2, 1e-15);

    auto resonant = nmr_hidden_adiabaticity(NmrParams::harmonic(1.0, 1.0, 2.0), TimeGrid(0.0, 1.0, 100));
    EXPECT_TRUE(std::isinf(resonant.adiabaticity_ratio));
    EXPECT_NEAR(resonant.analytic_fidelity.min_value, 1.0, 1e-12);
}

TEST(adiabatic, grover_stationary_marked_state) {
    AqcRunResult r = aqc_run(GroverProblem{3, 6}, Schedule::constant(0.0), 2.0, 20);
    EXPECT_NEAR(r.success_probability, 1.0, 1e-12);
    EXPECT_NEAR(*r.final_fidelity_vs_marked, 1.0, 1e-12);
}

TEST(adiabatic, grover_frozen_limit) {
    for (int n : {2, 3, 4}) {
        AqcRunResult r = grover_aqc_run(n, 1, 2.0, 1e-6, 4, {.initial = InitialState::UniformMinus});
        EXPECT_NEAR(*r.final_fidelity_vs_marked, std::ldexp(1.0, -n), 1e-6) << n;
        EXPECT_NEAR(r.initial_overlap_uniform, 1.0, 1e-15);
    }
}

TEST(adiabatic, grover_adequate_runtime) {
    auto sweep = runtime_doubling_sweep(GroverProblem{2, 3}, 2.0, 1.0, 6, 1e-2, 0.9, 2);
    ASSERT_TRUE(sweep.adequate_runtime.has_value());
    const AqcRunResult *adequate = nullptr;
    for (const auto &run : sweep.runs) {
        if (run.runtime == *sweep.adequate_runtime) {
            adequate = &run;
        }
    }
    ASSERT_NE(adequate, nullptr);
    // Oracle: the same run at a 10x finer step.
    AqcRunResult fine =
        grover_aqc_run(2, 3, 2.0, adequate->runtime, static_cast<std::size_t>(adequate->runtime / 1e-3));
    EXPECT_GE(fine.success_probability, 0.9);
    EXPECT_NEAR(fine.success_probability, adequate->success_probability, 1e-3);
    EXPECT_NEAR(*fine.final_fidelity_vs_marked, fine.success_probability, 1e-12);
    EXPECT_GT(adequate->min_gap, 0.0);
    EXPECT_NEAR(adequate->adiabaticity_ratio, adequate->min_gap * adequate->min_gap * adequate->runtime, 1e-12);
}

TEST(adiabatic, grover_sweep_is_monotone_for_small_n) {
    for (int n : {2, 3, 4}) {
        auto sweep = runtime_doubling_sweep(GroverProblem{n, 0}, 2.0, 0.5, 5, 1e-2, 0.99, 3);
        EXPECT_TRUE(sweep.monotonicity_violations.empty()) << n;
        EXPECT_EQ(sweep.runs.size(), 6u);
    }
}

TEST(adiabatic, sweep_is_independent_of_job_count) {
    auto serial = runtime_doubling_sweep(IsingProblem::chain(3, 0.5, -1.0), 2.0, 0.5, 3, 1e-2, 0.9, 1);
    auto parallel = runtime_doubling_sweep(IsingProblem::chain(3, 0.5, -1.0), 2.0, 0.5, 3, 1e-2, 0.9, 4);
    ASSERT_EQ(serial.runs.size(), parallel.runs.size());
    for (std::size_t k = 0; k < serial.runs.size(); k++) {
        EXPECT_EQ(serial.runs[k].success_probability, parallel.runs[k].success_probability);
    }
}

TEST(adiabatic, fast_counterpart_identity_frame) {
    auto gamma = default_annealing_schedule(2.0, 3.0);
    auto report = fast_counterpart_equivalence(GroverProblem{3, 7}, gamma, Schedule::constant(0.0), 3.0, 300);
    EXPECT_NEAR(report.fidelity_closed_form, 1.0, 1e-12);
    EXPECT_NEAR(report.fidelity_composed, 1.0, 1e-12);
    EXPECT_THROW(
        fast_counterpart_equivalence(GroverProblem{3, 7}, gamma, Schedule::constant(0.2), 3.0, 300),
        std::invalid_argument);
}

TEST(adiabatic, fast_counterpart_converges_at_second_order) {
    const double runtime = 4.0;
    auto gamma = default_annealing_schedule(2.0, runtime);
    auto phi = Schedule::harmonic(20 * kPi / runtime);
    auto report = fast_counterpart_equivalence(IsingProblem::chain(3, 0.5, -1.0), gamma, phi, runtime, 4000, true);
    ASSERT_TRUE(report.observed_order.has_value());
    EXPECT_NEAR(*report.observed_order, 2.0, 0.2);
    EXPECT_LT(*report.control_infidelity, 1 - report.fidelity_closed_form);
    EXPECT_GE(report.fidelity_composed, 1 - 1e-12);
    EXPECT_LE(report.max_hermitian_defect, 1e-12);
}
