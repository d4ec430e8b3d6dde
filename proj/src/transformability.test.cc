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

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "testing/oracles.h"

using namespace hamxform;
using hamxform::testing::kron_string;
using hamxform::testing::taylor_expm;

namespace {

constexpr double kPi = std::numbers::pi;
const NmrParams kBenchmark = NmrParams::harmonic(1.0, 1.5, 2.0);

double distance(const DenseOperator &a, const DenseOperator &b) { return phase_aligned_distance(a, b).distance; }

TransformTrace composed_nmr(const NmrParams &p, const TimeGrid &grid, std::size_t stride = 1) {
    auto fast = sample_trace(grid, [&](double t) { return analytic_nmr_propagator(p, t); }, "fast", stride);
    auto slow = sample_trace(grid, [&](double t) { return analytic_slow_propagator(p, t); }, "slow", stride);
    return compose_s(fast, slow);
}

DenseOperator x_sum(int n) {
    DenseOperator m = DenseOperator::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
    for (int q = 0; q < n; q++) {
        accumulate(m, PauliString::single(q, Axis::X), n);
    }
    return m;
}

}  // namespace

TEST(transformability, compose_s_examples) {
    TimeGrid grid(0.0, 4.0, 40);
    auto u = propagate(build_nmr(kBenchmark), grid);
    auto self = compose_s(u, u);
    for (std::size_t k = 0; k < self.size(); k++) {
        EXPECT_LT((self.value(k) - DenseOperator::Identity(2, 2)).norm(), 1e-13);
    }

    auto s = composed_nmr(kBenchmark, grid);
    EXPECT_LT((s.value(0) - DenseOperator::Identity(2, 2)).norm(), 1e-12);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::size_t> pick(1, grid.n_steps());
    for (int trial = 0; trial < 10; trial++) {
        std::size_t k = pick(rng);
        double t = grid.node(k);
        EXPECT_LT(distance(s.value(k), taylor_expm(kron_string("Z"), kBenchmark.omega0.eval(0.0) * t / 2)), 1e-12);
    }
    EXPECT_EQ(s.provenance(), TransformProvenance::Composed);
}

TEST(transformability, compose_s_rejects_mismatched_traces) {
    auto a = propagate(build_nmr(kBenchmark), TimeGrid(0.0, 1.0, 10));
    auto b = propagate(build_nmr(kBenchmark), TimeGrid(0.0, 1.0, 20));
    EXPECT_THROW(compose_s(a, b), std::invalid_argument);
    auto c = propagate(build_nmr(kBenchmark), TimeGrid(0.0, 1.0, 10), {.stride = 5});
    EXPECT_THROW(compose_s(a, c), std::invalid_argument);
    auto two = propagate(build_aqc(Schedule::constant(1.0), GroverProblem{2, 0}), TimeGrid(0.0, 1.0, 10));
    EXPECT_THROW(compose_s(a, two), std::invalid_argument);
}

TEST(transformability, composed_transforms_satisfy_invariants) {
    auto gamma = Schedule::linear_ramp(2.0, 0.0, 2.0);
    auto phi = Schedule::harmonic(5.0);
    GroverProblem grover{3, 2};
    TimeGrid grid(0.0, 2.0, 200);
    auto s = compose_s(propagate(build_fast_counterpart(gamma, grover, phi), grid), propagate(build_aqc(gamma, grover), grid));
    EXPECT_LT((s.value(0) - DenseOperator::Identity(8, 8)).norm(), 1e-12);
    for (std::size_t k = 0; k < s.size(); k++) {
        EXPECT_LE(unitarity_defect(s.value(k)), 1e-10);
    }
    EXPECT_FALSE(effective_hamiltonian(build_fast_counterpart(gamma, grover, phi), s).inconsistent);
    // Not the identity at the origin: composed transforms are rejected.
    std::vector<DenseOperator> shifted(3, pauli_matrix(Axis::X));
    EXPECT_THROW(
        TransformTrace(TimeGrid(0.0, 1.0, 2), 1, shifted, TransformProvenance::Composed, "x"), std::invalid_argument);
    EXPECT_NO_THROW(TransformTrace(TimeGrid(0.0, 1.0, 2), 1, shifted, TransformProvenance::ClosedForm, "x"));
}

TEST(transformability, closed_form_frames_match_composed) {
    TimeGrid grid(0.0, 3.0, 30);
    auto closed = nmr_frame_transform(kBenchmark, grid);
    auto composed = composed_nmr(kBenchmark, grid);
    for (std::size_t k = 0; k < closed.size(); k++) {
        EXPECT_LT(distance(closed.value(k), composed.value(k)), 1e-12);
    }

    auto phi = Schedule::harmonic(1.3);
    auto aqc = aqc_frame_transform(3, phi, grid);
    for (std::size_t k = 0; k < aqc.size(); k++) {
        double angle = phi.eval(grid.node(k));
        DenseOperator single = taylor_expm(kron_string("X"), angle);
        DenseOperator expected = hamxform::testing::kron(hamxform::testing::kron(single, single), single);
        EXPECT_LT((aqc.value(k) - expected).norm(), 1e-12);
    }
}

TEST(transformability, effective_hamiltonian_identity_frame) {
    auto h = build_nmr(kBenchmark);
    TimeGrid grid(0.0, 2.0, 20);
    auto sampled = effective_hamiltonian(h, identity_transform(1, grid));
    ASSERT_EQ(sampled.values.size(), grid.n_steps() - 1);
    for (std::size_t i = 0; i < sampled.values.size(); i++) {
        EXPECT_EQ(sampled.times[i], grid.node(i + 1));
        EXPECT_EQ(sampled.values[i], h.eval(sampled.times[i]));
    }
    EXPECT_EQ(sampled.max_anti_hermitian_defect(), 0.0);
    EXPECT_FALSE(sampled.inconsistent);

    auto back = forward_hamiltonian(h, identity_transform(1, grid));
    for (std::size_t i = 0; i < back.values.size(); i++) {
        EXPECT_EQ(back.values[i], h.eval(back.times[i]));
    }
}

TEST(transformability, effective_hamiltonian_constant_frame) {
    const double alpha = 0.37;
    auto h = build_aqc(Schedule::linear_ramp(1.0, 0.2, 1.0), GroverProblem{1, 1});
    DenseOperator s = taylor_expm(kron_string("Z"), -alpha);  // exp(i alpha Z)
    TimeGrid grid(0.0, 1.0, 10);
    auto frame = closed_form_transform(grid, [&](double) { return s; }, "exp(i alpha Z)");
    auto sampled = effective_hamiltonian(h, frame);
    for (std::size_t i = 0; i < sampled.values.size(); i++) {
        DenseOperator expected = s.adjoint() * h.eval(sampled.times[i]) * s;
        EXPECT_LT((sampled.values[i] - expected).norm(), 1e-14);
    }
}

TEST(transformability, nmr_rotating_frame_within_model) {
    auto fast = build_nmr(kBenchmark);
    auto slow = build_rotating_frame(kBenchmark);
    TimeGrid grid(0.0, 10.0, 10000);
    auto frame = nmr_frame_transform(kBenchmark, grid);
    auto curve = residual_curve(fast, slow, frame);
    EXPECT_EQ(curve.values.size(), grid.n_steps() - 1);
    // Closed-form bound for this frame: ||S'''|| = |theta' - phi'|^3 / 8 * sqrt(2).
    double rate = kBenchmark.omega0.eval(0.0);
    double bound = grid.dt() * grid.dt() / 6 * std::pow(rate, 3) / 8 * std::sqrt(2.0);
    EXPECT_LE(curve.max_residual, bound * 1.01);
    EXPECT_FALSE(curve.inconsistent);

    // Eq-6 data pushed back through the inverse relation recovers the lab-frame samples.
    auto lab = forward_hamiltonian(slow, frame);
    EXPECT_LE(sampled_residual(lab, fast).max_residual, 2 * bound * 1.01);
}

TEST(transformability, round_trip_within_twice_single_pass) {
    auto gamma = Schedule::linear_ramp(2.0, 0.0, 3.0);
    auto phi = Schedule::cosine_ramp(0.0, 4.0, 3.0);
    IsingProblem chain = IsingProblem::chain(3, 0.5, -1.0);
    auto fast = build_fast_counterpart(gamma, chain, phi);
    auto slow = build_aqc(gamma, chain);
    TimeGrid grid(0.0, 3.0, 600);
    auto frame = aqc_frame_transform(3, phi, grid);
    auto once = residual_curve(fast, slow, frame);
    auto there = effective_hamiltonian(fast, frame);
    auto back = forward_hamiltonian(there, frame);
    ASSERT_EQ(back.values.size(), there.values.size());
    double worst = 0;
    for (std::size_t i = 0; i < back.values.size(); i++) {
        worst = std::max(worst, (back.values[i] - fast.eval(back.times[i])).norm());
    }
    EXPECT_FALSE(there.inconsistent);
    EXPECT_FALSE(back.inconsistent);
    EXPECT_GT(once.max_residual, 0.0);
    EXPECT_LE(worst, 2 * once.max_residual + 1e-12);
}

TEST(transformability, kinked_frame_is_flagged_inconsistent) {
    TimeGrid grid(0.0, 1.0, 200);
    auto frame = closed_form_transform(
        grid, [](double t) { return herm_expm(pauli_matrix(Axis::Z), t < 0.5 ? 0.3 * t : 1.0 + 0.3 * t); }, "kink");
    auto sampled = effective_hamiltonian(build_nmr(kBenchmark), frame);
    EXPECT_TRUE(sampled.inconsistent);
    EXPECT_GT(sampled.max_anti_hermitian_defect(), 10 * sampled.model_bound);

    auto smooth = effective_hamiltonian(build_nmr(kBenchmark), nmr_frame_transform(kBenchmark, grid));
    EXPECT_FALSE(smooth.inconsistent);
}

TEST(transformability, verify_exact_pair) {
    auto h = build_nmr(kBenchmark);
    auto report = verify_transform(h, h, [](const TimeGrid &g) { return identity_transform(1, g); }, TimeGrid(0, 2, 100));
    EXPECT_LE(report.max_residual, 1e-12);
    EXPECT_TRUE(report.pass);
}

TEST(transformability, verify_nmr_pair) {
    auto fast = build_nmr(kBenchmark);
    auto slow = build_rotating_frame(kBenchmark);
    TimeGrid grid(0.0, 10.0, 10000);
    auto closed = verify_transform(fast, slow, [](const TimeGrid &g) { return nmr_frame_transform(kBenchmark, g); }, grid);
    EXPECT_TRUE(closed.pass) << closed.max_residual << " " << closed.bound;
    EXPECT_NEAR(closed.observed_order, 2.0, 0.2);
    EXPECT_EQ(closed.curve.values.size(), grid.n_steps() - 1);
    EXPECT_DOUBLE_EQ(closed.fd_step, 1e-3);

    auto composed = verify_transform(fast, slow, [](const TimeGrid &g) { return composed_nmr(kBenchmark, g); }, grid);
    EXPECT_TRUE(composed.pass) << composed.max_residual << " " << composed.bound;
}

TEST(transformability, verify_mismatched_pair_fails) {
    auto h = build_nmr(kBenchmark);
    auto shifted = h.with_term(Schedule::constant(1.0), PauliString::single(0, Axis::Z), "nmr+Z");
    auto report =
        verify_transform(h, shifted, [](const TimeGrid &g) { return identity_transform(1, g); }, TimeGrid(0, 2, 100));
    EXPECT_NEAR(report.max_residual, std::sqrt(2.0), 1e-12);
    EXPECT_FALSE(report.pass);
}

// The proof identity: S = U u^dagger from propagated traces maps H onto h with residual ~ dt^2.
TEST(transformability, composed_s_reproduces_slow_generator_at_second_order) {
    auto fast = build_nmr(kBenchmark);
    auto slow = build_rotating_frame(kBenchmark);
    std::vector<double> steps, residuals;
    for (std::size_t n : {500u, 1000u, 2000u, 4000u}) {
        TimeGrid grid(0.0, 5.0, n);
        auto s = compose_s(propagate(fast, grid), propagate(slow, grid));
        steps.push_back(grid.dt());
        residuals.push_back(residual_curve(fast, slow, s).max_residual);
    }
    EXPECT_NEAR(hamxform::testing::loglog_slope(steps, residuals), 2.0, 0.2);
}

TEST(transformability, two_gate_realize_matches_slow_evolution) {
    auto fast = build_fast_counterpart(Schedule::linear_ramp(2.0, 0.0, 2.0), GroverProblem{2, 1}, Schedule::harmonic(3.0));
    auto slow = build_aqc(Schedule::linear_ramp(2.0, 0.0, 2.0), GroverProblem{2, 1});
    TimeGrid grid(0.0, 2.0, 400);
    auto u = propagate(fast, grid);
    auto v = propagate(slow, grid);
    auto s = compose_s(u, v);
    std::mt19937_64 rng(13);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 8; trial++) {
        StateVector psi(4);
        for (auto &c : psi) {
            c = Complex(normal(rng), normal(rng));
        }
        psi.normalize();
        for (double t : {0.5, 2.0}) {
            EXPECT_NEAR(hamxform::fidelity(two_gate_realize(u, s, psi, t), apply(v, psi, t)), 1.0, 1e-12);
        }
    }
    EXPECT_THROW(two_gate_realize(u, s, minus_state(2), 0.5025), std::out_of_range);
}

TEST(transformability, nmr_correction_gate) {
    const double omega0 = 1.0, g = 25.0, detuning = 1.0;
    auto p = NmrParams::harmonic(omega0, omega0 + detuning, g);
    const double t_final = kPi / (2 * detuning);
    TimeGrid grid(0.0, t_final, 1000);
    auto s = composed_nmr(p, grid);
    DenseOperator gate = s.at(t_final).adjoint();
    DenseOperator expected = taylor_expm(kron_string("Z"), -kPi * omega0 / (4 * detuning));
    EXPECT_LT(distance(gate, expected), 1e-12);

    // Starting in |+->, the realized state is near an eigenstate of gY.
    auto fast = sample_trace(grid, [&](double t) { return analytic_nmr_propagator(p, t); }, "fast");
    double floor = 1 - detuning * detuning / (4 * g * g + detuning * detuning);
    StateVector y_minus(2), y_plus(2);
    y_minus << 1 / std::sqrt(2.0), Complex(0, -1 / std::sqrt(2.0));
    y_plus << 1 / std::sqrt(2.0), Complex(0, 1 / std::sqrt(2.0));
    EXPECT_GE(hamxform::fidelity(two_gate_realize(fast, s, minus_state(1), t_final), y_minus), floor - 1e-12);
    EXPECT_GE(hamxform::fidelity(two_gate_realize(fast, s, plus_state(1), t_final), y_plus), floor - 1e-12);
}

TEST(transformability, time_scaling_validation) {
    EXPECT_NO_THROW((TimeScaling{1.0, 1.0}.validate()));
    EXPECT_NO_THROW((TimeScaling{1.0, 100.0}.validate()));
    EXPECT_THROW((TimeScaling{2.0, 1.0}.validate()), std::invalid_argument);
    EXPECT_THROW((TimeScaling{0.0, 1.0}.validate()), std::invalid_argument);
    EXPECT_EQ((TimeScaling{2.0, 5.0}.ratio()), 2.5);
}

TEST(transformability, rescale_unit_ratio_is_exact) {
    auto h = build_aqc(Schedule::linear_ramp(2.0, 0.0, 1.0), GroverProblem{2, 3});
    auto report = rescale_equivalence(h, TimeScaling{3.0, 3.0}, TimeGrid(0.0, 1.0, 100));
    EXPECT_LE(report.max_distance, 1e-14);
    EXPECT_EQ(report.taus.size(), 101u);
}

TEST(transformability, rescale_grover) {
    auto h = build_aqc(Schedule::linear_ramp(2.0, 0.0, 1.0), GroverProblem{3, 5});
    auto report = rescale_equivalence(h, TimeScaling{0.1, 10.0}, TimeGrid(0.0, 1.0, 10000), 100);
    EXPECT_LE(report.max_distance, 1e-8);
}

TEST(transformability, rescaled_nmr_closed_form) {
    // The closed form is the resonant drive of one phase cycle per unit tau with area A.
    for (double area : {3.0, 12.5}) {
        NmrParams p = NmrParams::harmonic(0.0, 2 * kPi, area);
        for (double tau : {0.0, 0.3, 1.0}) {
            EXPECT_LT((rescaled_nmr_closed_form(area, tau) - analytic_nmr_propagator(p, tau)).norm(), 1e-13);
        }
    }
    // With T = 0.5, T' = 2 and g T = g' T' = A, both legs follow the closed form in tau.
    const double area = 4.0, t_fast = 0.5, t_slow = 2.0;
    auto fast = NmrParams::harmonic(0.0, 2 * kPi / t_fast, area / t_fast);
    auto slow = NmrParams::harmonic(0.0, 2 * kPi / t_slow, area / t_slow);
    for (double tau : {0.1, 0.5, 0.9, 1.0}) {
        DenseOperator reference = rescaled_nmr_closed_form(area, tau);
        EXPECT_LT(distance(analytic_nmr_propagator(fast, tau * t_fast), reference), 1e-12);
        EXPECT_LT(distance(analytic_nmr_propagator(slow, tau * t_slow), reference), 1e-12);
    }
    auto report = rescale_equivalence(resonant_nmr_in_tau(area, t_fast), TimeScaling{t_fast, t_slow}, TimeGrid(0, 1, 2000));
    EXPECT_LE(report.max_distance, 1e-12);
    EXPECT_LT(distance(report.fast.final(), rescaled_nmr_closed_form(area * t_slow / t_fast, 1.0)), 1e-4);
}

TEST(transformability, rescale_depends_on_drive_area_only) {
    TimeGrid grid(0.0, 1.0, 500);
    const double area = 3.0;
    auto base = rescale_equivalence(resonant_nmr_in_tau(area, 1.0), TimeScaling{1.0, 4.0}, grid);
    for (double c : {0.5, 2.0, 8.0}) {
        // g -> g c with T -> T / c.
        auto scaled = rescale_equivalence(resonant_nmr_in_tau(area, 1.0 / c), TimeScaling{1.0 / c, 4.0 / c}, grid);
        EXPECT_NEAR(scaled.max_distance, base.max_distance, 1e-12);
        EXPECT_LT(distance(scaled.fast.final(), base.fast.final()), 1e-12);
    }
}
