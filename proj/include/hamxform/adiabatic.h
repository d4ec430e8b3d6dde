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

#ifndef HAMXFORM_ADIABATIC_H
#define HAMXFORM_ADIABATIC_H

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hamxform/hamiltonians.h"
#include "hamxform/propagation.h"
#include "hamxform/transformability.h"

namespace hamxform {

struct FidelityCurve {
    std::vector<double> times;
    std::vector<double> values;
    double min_value = 1.0;
    /// g/|Omega| for the NMR qubit, min_gap^2 T for annealing runs.
    double adiabaticity_ratio = 0.0;
    /// Set when branch tracking failed; the curve stops before that node.
    bool truncated = false;
    std::string diagnostic;
};

/// F(t_k) = |<E_branch(t_k)| U(t_k) psi0>|^2 on every stored node of the trace. The branch is
/// followed node to node by maximal overlap with the previous branch, and degenerate
/// levels are treated as one subspace (F is then the projection weight).
FidelityCurve track_ground_state(
    const TimeDependentHamiltonian &h, const PropagatorTrace &trace, const StateVector &psi0,
    Eigen::Index branch = 0);

/// 1 - (Omega^2 / 4 kappa^2) sin^2(kappa t) with kappa = sqrt(g^2 + Omega^2/4): the weight of the
/// slow NMR evolution of |-> on the instantaneous ground state.
double nmr_ground_fidelity(double g, double detuning, double t);

/// Lower envelope of nmr_ground_fidelity: 1 - Omega^2 / (4 g^2 + Omega^2).
double nmr_fidelity_floor(double g, double detuning);

/// Largest ||H - H^dagger||_F over `samples` evenly spaced evaluation times of the grid.
double max_hermitian_defect(const TimeDependentHamiltonian &h, const TimeGrid &grid, std::size_t samples = 200);

struct NmrReport {
    double g = 0.0;
    double detuning = 0.0;
    double adiabaticity_ratio = 0.0;
    double final_time = 0.0;

    /// max_k distance between S from analytic U u^dagger and exp(i(theta-phi)Z/2).
    double s_closed_vs_composed_analytic = 0.0;
    /// Same with numerically propagated U and u.
    double s_closed_vs_composed_numeric = 0.0;
    /// Numeric fast propagator against the analytic one, max over nodes.
    double fast_propagator_error = 0.0;

    TransformReport verify_closed_form;
    TransformReport verify_composed;

    FidelityCurve analytic_fidelity;
    FidelityCurve numeric_fidelity;
    /// max_k |analytic curve - closed form|.
    double fidelity_closed_form_error = 0.0;
    double fidelity_floor = 0.0;

    /// S^dagger(T) from the composed analytic transform against exp(i omega0 T Z / 2).
    double correction_gate_distance = 0.0;
    /// fidelity(S^dagger U psi0, u psi0) with S composed from the numeric traces, psi0 = |->.
    double two_gate_fidelity_composed = 0.0;
    /// Same with the closed-form S and the numeric fast trace.
    double two_gate_fidelity_closed_form = 0.0;
    /// Two-gate output for |-> and |+> against the ground and excited states of h(T).
    double two_gate_ground_fidelity = 0.0;
    double two_gate_excited_fidelity = 0.0;

    double max_unitarity_defect = 0.0;
    double max_hermitian_defect = 0.0;
};

/// The driven qubit and its slowly varying rotating frame: builds both Hamiltonians,
/// closed-form and composed transforms, verifies the frame relation, tracks the
/// adiabatic ground state and realizes the two-gate protocol at grid.t_end().
NmrReport nmr_hidden_adiabaticity(const NmrParams &p, const TimeGrid &grid);

enum class InitialState {
    /// Exact ground state of h(0).
    ExactGround,
    /// |->^{tensor n}, the ground state of the transverse term alone.
    UniformMinus,
};

struct AqcOptions {
    InitialState initial = InitialState::ExactGround;
    std::size_t gap_samples = 201;
    /// When non-zero, store every `curve_stride`-th node and track the ground state on them.
    std::size_t curve_stride = 0;
};

struct AqcRunResult {
    double runtime = 0.0;
    std::size_t n_steps = 0;
    /// Weight of the final state on the ground manifold of h(T).
    double success_probability = 0.0;
    /// |<B|psi(T)>|^2 for Grover problems.
    std::optional<double> final_fidelity_vs_marked;
    double min_gap = 0.0;
    double adiabaticity_ratio = 0.0;
    /// |<psi0|->^{tensor n}|^2.
    double initial_overlap_uniform = 0.0;
    double max_unitarity_defect = 0.0;
    std::optional<FidelityCurve> ground_curve;
};

/// Gamma(t) as a linear ramp Gamma0 -> 0 over [0, T] (the default annealing schedule).
Schedule default_annealing_schedule(double gamma0, double runtime);

AqcRunResult aqc_run(
    const Problem &problem, const Schedule &gamma, double runtime, std::size_t n_steps, AqcOptions options = {});

AqcRunResult grover_aqc_run(
    int n_qubits, std::size_t marked, double gamma0, double runtime, std::size_t n_steps, AqcOptions options = {});

struct RuntimeSweep {
    std::vector<AqcRunResult> runs;
    /// First runtime whose success probability met the threshold.
    std::optional<double> adequate_runtime;
    /// Indices i where success(i) < success(i-1).
    std::vector<std::size_t> monotonicity_violations;
};

/// Runs T0, 2 T0, ..., 2^doublings T0 at fixed step size dt, sharding runs over `jobs` workers.
RuntimeSweep runtime_doubling_sweep(
    const Problem &problem, double gamma0, double initial_runtime, std::size_t doublings, double dt,
    double threshold, std::size_t jobs = 1);

struct FastCounterpartReport {
    /// fidelity(S^dagger(T) U(T) psi0, u(T) psi0) with S = prod_i exp(-i phi(T) X_i).
    double fidelity_closed_form = 0.0;
    /// Same with S = U u^dagger.
    double fidelity_composed = 0.0;
    /// 1 - fidelity_closed_form on the 2x refined control grid (when requested).
    std::optional<double> control_infidelity;
    /// Observed order of the state error from the control run.
    std::optional<double> observed_order;
    /// Ground-manifold weight of the slow final state.
    double slow_success_probability = 0.0;
    double max_unitarity_defect = 0.0;
    double max_hermitian_defect = 0.0;
};

/// Evolves the fast Hamiltonian, applies the correction gate S^dagger(T) and compares with
/// slow evolution under the annealing Hamiltonian. Requires phi(0) = 0.
FastCounterpartReport fast_counterpart_equivalence(
    const Problem &problem, const Schedule &gamma, const Schedule &phi, double runtime, std::size_t n_steps,
    bool refinement_control = false);

}  // namespace hamxform

#endif
