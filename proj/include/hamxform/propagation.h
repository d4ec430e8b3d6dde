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

#ifndef HAMXFORM_PROPAGATION_H
#define HAMXFORM_PROPAGATION_H

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "hamxform/hamiltonians.h"
#include "hamxform/operators.h"

namespace hamxform {

/// Uniform grid t_k = t_start + k (t_end - t_start) / n_steps, k = 0..n_steps.
class TimeGrid {
   public:
    TimeGrid(double t_start, double t_end, std::size_t n_steps);

    double t_start() const { return t_start_; }
    double t_end() const { return t_end_; }
    std::size_t n_steps() const { return n_steps_; }
    std::size_t n_nodes() const { return n_steps_ + 1; }
    double dt() const { return (t_end_ - t_start_) / static_cast<double>(n_steps_); }

    /// Node k; the last node is exactly t_end.
    double node(std::size_t k) const;

    /// Same interval with `factor` times as many steps.
    TimeGrid refined(std::size_t factor) const;

    bool operator==(const TimeGrid &) const = default;

   private:
    double t_start_;
    double t_end_;
    std::size_t n_steps_;
};

/// Unitaries stored on every `stride`-th node of a grid (the last node always included).
class PropagatorTrace {
   public:
    PropagatorTrace(TimeGrid grid, std::size_t stride, std::vector<DenseOperator> unitaries, std::string label);

    const TimeGrid &grid() const { return grid_; }
    std::size_t stride() const { return stride_; }
    const std::string &label() const { return label_; }
    std::size_t size() const { return unitaries_.size(); }
    Eigen::Index dim() const { return unitaries_.front().rows(); }

    /// Time of stored entry i.
    double time(std::size_t i) const { return grid_.node(i * stride_); }
    const DenseOperator &unitary(std::size_t i) const { return unitaries_.at(i); }
    const std::vector<DenseOperator> &unitaries() const { return unitaries_; }
    const DenseOperator &final() const { return unitaries_.back(); }

    /// Spacing between stored entries.
    double stored_dt() const { return grid_.dt() * static_cast<double>(stride_); }

    /// Index of the stored entry at t. Strict mode requires t to coincide with a
    /// stored node; otherwise the nearest node within half a stored step is used.
    /// Throws std::out_of_range when no node qualifies.
    std::size_t index_of(double t, bool strict = true) const;

    double max_unitarity_defect() const;

   private:
    TimeGrid grid_;
    std::size_t stride_;
    std::vector<DenseOperator> unitaries_;
    std::string label_;
};

/// Thrown when a propagation step loses unitarity beyond kUnitaryAbortTolerance.
class PropagationError : public std::runtime_error {
   public:
    PropagationError(std::size_t step, double defect);
    std::size_t step() const { return step_; }
    double defect() const { return defect_; }

   private:
    std::size_t step_;
    double defect_;
};

struct PropagateOptions {
    /// Store every `stride`-th node; must divide n_steps.
    std::size_t stride = 1;
};

/// Midpoint-exponential integration of i dU/dt = H(t) U with U(t_start) = I:
/// U_{k+1} = exp(-i dt H(t_k + dt/2)) U_k.
PropagatorTrace propagate(const TimeDependentHamiltonian &h, const TimeGrid &grid, PropagateOptions options = {});

/// Samples a closed-form propagator on the grid.
PropagatorTrace sample_trace(
    const TimeGrid &grid, const std::function<DenseOperator(double)> &unitary_at, std::string label,
    std::size_t stride = 1);

/// exp(-i omega Z t / 2) exp(-i (2 g X - Omega Z) t / 2), the propagator of build_nmr in
/// the harmonic case phi = omega t with constant omega0 and Omega = omega - omega0.
DenseOperator analytic_nmr_propagator(const NmrParams &p, double t);

/// exp(-i Omega Z t / 2) exp(-i (2 g X - Omega Z) t / 2), the propagator of
/// build_rotating_frame when additionally theta = Omega t.
DenseOperator analytic_slow_propagator(const NmrParams &p, double t);

DenseOperator at(const PropagatorTrace &trace, double t, bool strict = true);

/// U(t) psi0. Throws if psi0 is not normalized or has the wrong dimension.
StateVector apply(const PropagatorTrace &trace, const StateVector &psi0, double t, bool strict = true);

/// Text export: a header, then one line per stored node holding t followed by the
/// row-major (re, im) entries at full double precision.
void write_trace(std::ostream &out, const PropagatorTrace &trace);
PropagatorTrace read_trace(std::istream &in);

}  // namespace hamxform

#endif
