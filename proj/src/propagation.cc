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

#include "hamxform/propagation.h"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace hamxform {

TimeGrid::TimeGrid(double t_start, double t_end, std::size_t n_steps)
    : t_start_(t_start), t_end_(t_end), n_steps_(n_steps) {
    if (n_steps_ < 1) {
        throw std::invalid_argument("TimeGrid: n_steps must be at least 1");
    }
    if (!std::isfinite(t_start_) || !std::isfinite(t_end_) || !(t_end_ > t_start_)) {
        throw std::invalid_argument("TimeGrid: need finite t_start < t_end");
    }
}

double TimeGrid::node(std::size_t k) const {
    if (k >= n_steps_) {
        return t_end_;
    }
    return t_start_ + (t_end_ - t_start_) * (static_cast<double>(k) / static_cast<double>(n_steps_));
}

TimeGrid TimeGrid::refined(std::size_t factor) const {
    return TimeGrid(t_start_, t_end_, n_steps_ * factor);
}

PropagatorTrace::PropagatorTrace(
    TimeGrid grid, std::size_t stride, std::vector<DenseOperator> unitaries, std::string label)
    : grid_(grid), stride_(stride), unitaries_(std::move(unitaries)), label_(std::move(label)) {
    if (stride_ < 1 || grid_.n_steps() % stride_ != 0) {
        throw std::invalid_argument("PropagatorTrace: stride must divide n_steps");
    }
    if (unitaries_.size() != grid_.n_steps() / stride_ + 1) {
        throw std::invalid_argument("PropagatorTrace: wrong number of stored unitaries for the grid");
    }
    for (std::size_t i = 0; i < unitaries_.size(); i++) {
        require_unitary(unitaries_[i], "trace '" + label_ + "' node " + std::to_string(i));
    }
}

std::size_t PropagatorTrace::index_of(double t, bool strict) const {
    double step = stored_dt();
    double pos = (t - grid_.t_start()) / step;
    double nearest = std::round(pos);
    if (nearest < 0.0 || nearest > static_cast<double>(size() - 1)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "time " << t << " outside trace [" << grid_.t_start() << ", " << grid_.t_end() << "]";
        throw std::out_of_range(msg.str());
    }
    double offset = std::abs(pos - nearest);
    if (strict ? offset > 1e-9 : offset > 0.5 + 1e-12) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "time " << t << " is not a stored grid node (nearest " << time(static_cast<std::size_t>(nearest))
            << ")";
        throw std::out_of_range(msg.str());
    }
    return static_cast<std::size_t>(nearest);
}

double PropagatorTrace::max_unitarity_defect() const {
    double worst = 0.0;
    for (const auto &u : unitaries_) {
        worst = std::max(worst, unitarity_defect(u));
    }
    return worst;
}

PropagationError::PropagationError(std::size_t step, double defect)
    : std::runtime_error([&] {
          std::ostringstream msg;
          msg << "propagation lost unitarity at step " << step << " (defect " << defect << " > "
              << kUnitaryAbortTolerance << ")";
          return msg.str();
      }()),
      step_(step),
      defect_(defect) {}

PropagatorTrace propagate(const TimeDependentHamiltonian &h, const TimeGrid &grid, PropagateOptions options) {
    if (options.stride < 1 || grid.n_steps() % options.stride != 0) {
        throw std::invalid_argument("propagate: stride must divide n_steps");
    }
    if (!h.contains(grid.t_start()) || !h.contains(grid.t_end())) {
        throw std::out_of_range("propagate: grid extends outside the Hamiltonian's domain");
    }
    const double dt = grid.dt();
    DenseOperator u = DenseOperator::Identity(h.dim(), h.dim());
    std::vector<DenseOperator> stored;
    stored.reserve(grid.n_steps() / options.stride + 1);
    stored.push_back(u);
    for (std::size_t k = 0; k < grid.n_steps(); k++) {
        double mid = 0.5 * (grid.node(k) + grid.node(k + 1));
        u = herm_expm(h.eval(mid), dt) * u;
        double defect = unitarity_defect(u);
        if (!(defect <= kUnitaryAbortTolerance)) {
            throw PropagationError(k + 1, defect);
        }
        if ((k + 1) % options.stride == 0) {
            stored.push_back(u);
        }
    }
    return PropagatorTrace(grid, options.stride, std::move(stored), h.label());
}

PropagatorTrace sample_trace(
    const TimeGrid &grid, const std::function<DenseOperator(double)> &unitary_at, std::string label,
    std::size_t stride) {
    if (stride < 1 || grid.n_steps() % stride != 0) {
        throw std::invalid_argument("sample_trace: stride must divide n_steps");
    }
    std::vector<DenseOperator> stored;
    stored.reserve(grid.n_steps() / stride + 1);
    for (std::size_t k = 0; k <= grid.n_steps(); k += stride) {
        stored.push_back(unitary_at(grid.node(k)));
    }
    return PropagatorTrace(grid, stride, std::move(stored), std::move(label));
}

namespace {

DenseOperator nutation_factor(double g, double detuning, double t) {
    DenseOperator generator = 2.0 * g * pauli_matrix(Axis::X) - detuning * pauli_matrix(Axis::Z);
    return herm_expm(generator, 0.5 * t);
}

}  // namespace

DenseOperator analytic_nmr_propagator(const NmrParams &p, double t) {
    p.validate();
    double omega = p.omega();
    return herm_expm(pauli_matrix(Axis::Z), 0.5 * omega * t) * nutation_factor(p.g, p.detuning(), t);
}

DenseOperator analytic_slow_propagator(const NmrParams &p, double t) {
    p.validate();
    double detuning = p.detuning();
    auto theta_rate = p.theta.harmonic_rate();
    if (!theta_rate || std::abs(*theta_rate - detuning) > 1e-12 * std::max(1.0, std::abs(detuning))) {
        throw std::invalid_argument("analytic_slow_propagator: needs theta(t) = (omega - omega0) t");
    }
    return herm_expm(pauli_matrix(Axis::Z), 0.5 * detuning * t) * nutation_factor(p.g, detuning, t);
}

DenseOperator at(const PropagatorTrace &trace, double t, bool strict) {
    return trace.unitary(trace.index_of(t, strict));
}

StateVector apply(const PropagatorTrace &trace, const StateVector &psi0, double t, bool strict) {
    if (psi0.size() != trace.dim()) {
        throw std::invalid_argument("apply: state dimension does not match the trace");
    }
    if (std::abs(psi0.squaredNorm() - 1.0) > 1e-10) {
        throw std::invalid_argument("apply: initial state is not normalized");
    }
    return at(trace, t, strict) * psi0;
}

namespace {

constexpr const char *kTraceMagic = "# hamxform-trace v1";

}  // namespace

void write_trace(std::ostream &out, const PropagatorTrace &trace) {
    auto old_precision = out.precision(17);
    out << kTraceMagic << '\n';
    out << "# label " << trace.label() << '\n';
    out << "# grid " << trace.grid().t_start() << ' ' << trace.grid().t_end() << ' ' << trace.grid().n_steps()
        << " stride " << trace.stride() << " dim " << trace.dim() << '\n';
    for (std::size_t i = 0; i < trace.size(); i++) {
        out << trace.time(i);
        const auto &u = trace.unitary(i);
        for (Eigen::Index r = 0; r < u.rows(); r++) {
            for (Eigen::Index c = 0; c < u.cols(); c++) {
                out << ' ' << u(r, c).real() << ' ' << u(r, c).imag();
            }
        }
        out << '\n';
    }
    out.precision(old_precision);
}

PropagatorTrace read_trace(std::istream &in) {
    std::string line;
    if (!std::getline(in, line) || line != kTraceMagic) {
        throw std::invalid_argument("read_trace: missing trace header");
    }
    if (!std::getline(in, line) || line.rfind("# label ", 0) != 0) {
        throw std::invalid_argument("read_trace: missing label line");
    }
    std::string label = line.substr(8);
    if (!std::getline(in, line)) {
        throw std::invalid_argument("read_trace: missing grid line");
    }
    std::istringstream header(line);
    std::string hash, grid_word, stride_word, dim_word;
    double t_start = 0, t_end = 0;
    std::size_t n_steps = 0, stride = 0;
    Eigen::Index dim = 0;
    header >> hash >> grid_word >> t_start >> t_end >> n_steps >> stride_word >> stride >> dim_word >> dim;
    if (!header || grid_word != "grid" || stride_word != "stride" || dim_word != "dim" || dim < 1) {
        throw std::invalid_argument("read_trace: malformed grid line");
    }
    TimeGrid grid(t_start, t_end, n_steps);
    std::vector<DenseOperator> unitaries;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream row(line);
        double t = 0;
        row >> t;
        DenseOperator u(dim, dim);
        for (Eigen::Index r = 0; r < dim; r++) {
            for (Eigen::Index c = 0; c < dim; c++) {
                double re = 0, im = 0;
                row >> re >> im;
                u(r, c) = Complex(re, im);
            }
        }
        if (!row) {
            throw std::invalid_argument("read_trace: truncated record " + std::to_string(unitaries.size()));
        }
        unitaries.push_back(std::move(u));
    }
    return PropagatorTrace(grid, stride, std::move(unitaries), label);
}

}  // namespace hamxform
