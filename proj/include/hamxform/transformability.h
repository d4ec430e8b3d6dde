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

#ifndef HAMXFORM_TRANSFORMABILITY_H
#define HAMXFORM_TRANSFORMABILITY_H

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "hamxform/hamiltonians.h"
#include "hamxform/operators.h"
#include "hamxform/propagation.h"

namespace hamxform {

enum class TransformProvenance {
    /// S = U u^dagger built from two propagator traces.
    Composed,
    /// S sampled from an explicit expression.
    ClosedForm,
};

/// A frame transformation S(t_k) on a grid. Every S(t_k) is unitary; composed transforms start at I.
class TransformTrace {
   public:
    TransformTrace(
        TimeGrid grid, std::size_t stride, std::vector<DenseOperator> values, TransformProvenance provenance,
        std::string label);

    const TimeGrid &grid() const { return ops_.grid(); }
    std::size_t stride() const { return ops_.stride(); }
    std::size_t size() const { return ops_.size(); }
    double time(std::size_t i) const { return ops_.time(i); }
    double stored_dt() const { return ops_.stored_dt(); }
    const DenseOperator &value(std::size_t i) const { return ops_.unitary(i); }
    const DenseOperator &at(double t, bool strict = true) const { return ops_.unitary(ops_.index_of(t, strict)); }
    std::size_t index_of(double t, bool strict = true) const { return ops_.index_of(t, strict); }
    Eigen::Index dim() const { return ops_.dim(); }
    TransformProvenance provenance() const { return provenance_; }
    const std::string &label() const { return ops_.label(); }
    const PropagatorTrace &as_trace() const { return ops_; }

   private:
    PropagatorTrace ops_;
    TransformProvenance provenance_;
};

/// S(t_k) = U(t_k) u(t_k)^dagger. The traces must share grid and stride.
TransformTrace compose_s(const PropagatorTrace &fast, const PropagatorTrace &slow);

TransformTrace closed_form_transform(
    const TimeGrid &grid, const std::function<DenseOperator(double)> &s_at, std::string label, std::size_t stride = 1);

TransformTrace identity_transform(int n_qubits, const TimeGrid &grid, std::size_t stride = 1);

/// S(t) = exp(i (theta(t) - phi(t)) Z / 2), relating build_nmr to build_rotating_frame.
TransformTrace nmr_frame_transform(const NmrParams &p, const TimeGrid &grid, std::size_t stride = 1);

/// S(t) = prod_i exp(-i phi(t) X_i), relating build_fast_counterpart to build_aqc.
TransformTrace aqc_frame_transform(int n_qubits, const Schedule &phi, const TimeGrid &grid, std::size_t stride = 1);

/// Hermitian matrices sampled on the interior stored nodes of a transform trace.
struct SampledHamiltonian {
    std::vector<double> times;
    /// Stored-node index of each sample within the transform trace.
    std::vector<std::size_t> nodes;
    std::vector<DenseOperator> values;
    /// ||(h - h^dagger)/2||_F before symmetrization, per sample.
    std::vector<double> anti_hermitian_defect;
    /// Expected size of the defect from central differencing, (dt^2/6) median_k ||S'''(t_k)||.
    double model_bound = 0.0;
    /// Set when some defect exceeds 10x the model bound (plus a round-off floor).
    bool inconsistent = false;

    double max_anti_hermitian_defect() const;
};

/// h_k = S^dagger H S - i S^dagger dS/dt at every interior node, with dS/dt from
/// central differences (S_{k+1} - S_{k-1}) / (2 dt).
SampledHamiltonian effective_hamiltonian(const TimeDependentHamiltonian &fast, const TransformTrace &s);
SampledHamiltonian effective_hamiltonian(const SampledHamiltonian &fast, const TransformTrace &s);

/// H_k = S h S^dagger - i S dS^dagger/dt, the inverse relation.
SampledHamiltonian forward_hamiltonian(const TimeDependentHamiltonian &slow, const TransformTrace &s);
SampledHamiltonian forward_hamiltonian(const SampledHamiltonian &slow, const TransformTrace &s);

struct ResidualCurve {
    std::vector<double> times;
    std::vector<double> values;
    double max_residual = 0.0;
    double max_anti_hermitian_defect = 0.0;
    bool inconsistent = false;
};

/// r_k = ||effective_hamiltonian(fast, s)_k - slow(t_k)||_F.
ResidualCurve residual_curve(
    const TimeDependentHamiltonian &fast, const TimeDependentHamiltonian &slow, const TransformTrace &s);

/// ||reference(t_k) - sampled_k||_F per sample.
ResidualCurve sampled_residual(const SampledHamiltonian &sampled, const TimeDependentHamiltonian &reference);

/// Builds a transform on a requested grid (used for the refinement control run).
using TransformFactory = std::function<TransformTrace(const TimeGrid &)>;

inline constexpr double kResidualFloor = 1e-10;
/// Relative allowance on the calibrated constant C for the O(dt^4) remainder.
inline constexpr double kModelSlack = 0.05;

struct TransformReport {
    ResidualCurve curve;
    double max_residual = 0.0;
    /// Differentiation step (the stored grid spacing).
    double fd_step = 0.0;
    /// Max residual of the 2x-refined control run.
    double control_max_residual = 0.0;
    /// C in the C dt^2 model, calibrated from the control run.
    double model_constant = 0.0;
    /// (1 + kModelSlack) C dt^2 + kResidualFloor.
    double bound = 0.0;
    /// log2(max_residual / control_max_residual).
    double observed_order = 0.0;
    bool pass = false;
};

/// Checks h = S^dagger H S - i S^dagger dS/dt on `grid`. The verdict passes when the
/// residual is at round-off level, or when it is within C dt^2 (C from the refined
/// control run) and shrinks at second order (observed order >= 1.8).
TransformReport verify_transform(
    const TimeDependentHamiltonian &fast, const TimeDependentHamiltonian &slow, const TransformFactory &make_s,
    const TimeGrid &grid);

/// S^dagger(T) U(T) psi0: one evolution under the fast Hamiltonian followed by one
/// correction gate.
StateVector two_gate_realize(
    const PropagatorTrace &fast, const TransformTrace &s, const StateVector &psi0, double t_final);

/// Fast characteristic time T and slow characteristic time T' sharing tau = t/T = t'/T'.
struct TimeScaling {
    double fast_time = 1.0;
    double slow_time = 1.0;

    /// Requires 0 < fast_time <= slow_time.
    void validate() const;
    double ratio() const { return slow_time / fast_time; }
};

struct RescaleReport {
    double max_distance = 0.0;
    std::vector<double> taus;
    std::vector<double> distances;
    PropagatorTrace fast;
    PropagatorTrace slow;
};

/// With S = 1 and H = (T'/T) h, propagates i dU/dtau = T H(tau) U and
/// i du/dtau = T' h(tau) u over the tau grid and compares them node-wise.
RescaleReport rescale_equivalence(
    const TimeDependentHamiltonian &slow_in_tau, const TimeScaling &scaling, const TimeGrid &tau_grid,
    std::size_t stride = 1);

/// exp(-i pi Z tau) exp(-i (A X - pi Z) tau) with drive area A = g T: the propagator of the
/// resonant (omega0 = 0) NMR drive completing one full phase cycle per unit tau.
DenseOperator rescaled_nmr_closed_form(double drive_area, double tau);

/// The resonant NMR Hamiltonian in scaling time: omega0 = 0, drive g_tau = A / T_ref and
/// phase 2 pi tau, i.e. build_nmr with g = drive_area / reference_time and omega = 2 pi.
TimeDependentHamiltonian resonant_nmr_in_tau(double drive_area, double reference_time);

}  // namespace hamxform

#endif
