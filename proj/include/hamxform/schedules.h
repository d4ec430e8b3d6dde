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

#ifndef HAMXFORM_SCHEDULES_H
#define HAMXFORM_SCHEDULES_H

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hamxform {

enum class ScheduleKind {
    Constant,
    LinearRamp,
    Harmonic,
    CosineRamp,
    Tabulated,
    // Combinators built from other schedules.
    Sum,
    Scaled,
    Derivative,
    Cos,
    Sin,
};

std::string schedule_kind_name(ScheduleKind kind);

/// A real function of time with an evaluable derivative. Units are hbar = 1:
/// rates are angular frequencies and time is their reciprocal.
///
/// Schedules are immutable values; copies share their (read-only) definition.
class Schedule {
   public:
    /// The zero constant.
    Schedule();

    /// Always `c`. Defined for t >= 0.
    static Schedule constant(double c);
    /// a + (b - a) t / duration on [0, duration].
    static Schedule linear_ramp(double a, double b, double duration);
    /// rate * t for t >= 0 (a phase advancing at angular frequency `rate`).
    static Schedule harmonic(double rate);
    /// a + (b - a) (1 - cos(pi t / duration)) / 2 on [0, duration].
    static Schedule cosine_ramp(double a, double b, double duration);
    /// Natural cubic spline through the samples. Times must be strictly increasing.
    static Schedule tabulated(std::vector<double> times, std::vector<double> values);

    Schedule operator+(const Schedule &other) const;
    Schedule operator-(const Schedule &other) const;
    Schedule scaled(double factor) const;
    /// d/dt of this schedule, as a schedule.
    Schedule derivative() const;
    Schedule cos() const;
    Schedule sin() const;

    /// Throws std::out_of_range outside the domain.
    double eval(double t) const;
    double eval_derivative(double t) const;

    ScheduleKind kind() const;
    double t_min() const;
    /// Upper end of the domain; +inf for unbounded kinds.
    double t_max() const;
    bool contains(double t) const;

    /// Value for Constant schedules.
    std::optional<double> constant_value() const;
    /// Rate for Harmonic schedules.
    std::optional<double> harmonic_rate() const;
    /// Finite-difference step used for Tabulated derivatives.
    std::optional<double> fd_step() const;

    /// Primitive parameters: Constant {c}, LinearRamp/CosineRamp {a, b, duration},
    /// Harmonic {rate}. Empty for other kinds.
    std::vector<double> parameters() const;
    const std::vector<double> &sample_times() const;
    const std::vector<double> &sample_values() const;

    std::string describe() const;

    struct Node;

   private:
    explicit Schedule(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    double value(double t, int order) const;

    std::shared_ptr<const Node> node_;
};

/// Parameters of the driven single-qubit (NMR-type) Hamiltonian and its rotating frame.
struct NmrParams {
    /// Qubit splitting omega0(t).
    Schedule omega0;
    /// Constant drive strength, g > 0.
    double g = 1.0;
    /// Drive phase phi(t).
    Schedule phi;
    /// Target frame phase theta(t).
    Schedule theta;

    /// The solvable case phi = omega t, theta = (omega - omega0) t with constant omega0.
    static NmrParams harmonic(double omega0, double omega, double g);

    /// Throws std::invalid_argument unless g > 0 and all values are finite.
    void validate() const;

    /// True when omega0 is constant and phi is harmonic.
    bool is_harmonic() const;
    /// Drive frequency omega; throws unless is_harmonic().
    double omega() const;
    /// Omega = omega - omega0; throws unless is_harmonic().
    double detuning() const;
};

}  // namespace hamxform

#endif
