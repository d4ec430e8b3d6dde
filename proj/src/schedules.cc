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

#include "hamxform/schedules.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace hamxform {

struct Schedule::Node {
    ScheduleKind kind = ScheduleKind::Constant;
    double a = 0.0;
    double b = 0.0;
    double duration = 0.0;
    std::vector<Schedule> children;
    // Tabulated data.
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> second;  // spline second derivatives at the knots
    double h_fd = 0.0;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
};

namespace {

constexpr double kPi = std::numbers::pi;

const std::vector<double> kEmpty;

double domain_slack(double hi) {
    return 1e-12 * std::max(1.0, std::isfinite(hi) ? std::abs(hi) : 1.0);
}

// Natural cubic spline second derivatives (tridiagonal solve).
std::vector<double> natural_spline(const std::vector<double> &x, const std::vector<double> &y) {
    std::size_t n = x.size();
    std::vector<double> m(n, 0.0);
    if (n < 3) {
        return m;
    }
    std::vector<double> diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; i++) {
        double h0 = x[i] - x[i - 1];
        double h1 = x[i + 1] - x[i];
        diag[i] = (h0 + h1) / 3.0;
        upper[i] = h1 / 6.0;
        rhs[i] = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
    }
    // Forward sweep over interior rows; lower coefficient of row i is h_{i-1}/6.
    for (std::size_t i = 2; i + 1 < n; i++) {
        double lower = (x[i] - x[i - 1]) / 6.0;
        double w = lower / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    for (std::size_t i = n - 2; i >= 1; i--) {
        double next = (i + 2 < n) ? m[i + 1] : 0.0;
        m[i] = (rhs[i] - upper[i] * next) / diag[i];
    }
    return m;
}

double spline_eval(const Schedule::Node &n, double t) {
    const auto &x = n.times;
    std::size_t hi = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), t) - x.begin());
    hi = std::clamp<std::size_t>(hi, 1, x.size() - 1);
    std::size_t lo = hi - 1;
    double h = x[hi] - x[lo];
    double A = (x[hi] - t) / h;
    double B = (t - x[lo]) / h;
    return A * n.values[lo] + B * n.values[hi] +
           ((A * A * A - A) * n.second[lo] + (B * B * B - B) * n.second[hi]) * h * h / 6.0;
}

}  // namespace

std::string schedule_kind_name(ScheduleKind kind) {
    switch (kind) {
        case ScheduleKind::Constant:
            return "constant";
        case ScheduleKind::LinearRamp:
            return "linear_ramp";
        case ScheduleKind::Harmonic:
            return "harmonic";
        case ScheduleKind::CosineRamp:
            return "cosine_ramp";
        case ScheduleKind::Tabulated:
            return "tabulated";
        case ScheduleKind::Sum:
            return "sum";
        case ScheduleKind::Scaled:
            return "scaled";
        case ScheduleKind::Derivative:
            return "derivative";
        case ScheduleKind::Cos:
            return "cos";
        case ScheduleKind::Sin:
            return "sin";
    }
    return "unknown";
}

Schedule::Schedule() : Schedule(constant(0.0)) {}

Schedule Schedule::constant(double c) {
    auto n = std::make_shared<Node>();
    n->kind = ScheduleKind::Constant;
    n->a = c;
    return Schedule(std::move(n));
}

Schedule Schedule::linear_ramp(double a, double b, double duration) {
    if (!(duration > 0.0)) {
        throw std::invalid_argument("linear_ramp: duration must be positive");
    }
    auto n = std::make_shared<Node>();
    n->kind = ScheduleKind::LinearRamp;
    n->a = a;
    n->b = b;
    n->duration = duration;
    n->hi = duration;
    return Schedule(std::move(n));
}

Schedule Schedule::harmonic(double rate) {
    auto n = std::make_shared<Node>();
    n->kind = ScheduleKind::Harmonic;
    n->a = rate;
    return Schedule(std::move(n));
}

Schedule Schedule::cosine_ramp(double a, double b, double duration) {
    if (!(duration > 0.0)) {
        throw std::invalid_argument("cosine_ramp: duration must be positive");
    }
    auto n = std::make_shared<Node>();
    n->kind = ScheduleKind::CosineRamp;
    n->a = a;
    n->b = b;
    n->duration = duration;
    n->hi = duration;
    return Schedule(std::move(n));
}

Schedule Schedule::tabulated(std::vector<double> times, std::vector<double> values) {
    if (times.size() != values.size()) {
        throw std::invalid_argument("tabulated: times and values differ in length");
    }
    if (times.size() < 2) {
        throw std::invalid_argument("tabulated: need at least two samples");
    }
    double min_spacing = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < times.size(); k++) {
        if (!(times[k] > times[k - 1])) {
            throw std::invalid_argument("tabulated: sample times must be strictly increasing");
        }
        min_spacing = std::min(min_spacing, times[k] - times[k - 1]);
    }
    if (times.front() < 0.0) {
        throw std::invalid_argument("tabulated: sample times must be non-negative");
    }
    auto n = std::make_shared<Node>();
    n->kind = ScheduleKind::Tabulated;
    n->second = natural_spline(times, values);
    n->lo = times.front();
    n->hi = times.back();
    n->h_fd = std::min(min_spacing, 1e-3 * n->hi);
    n->times = std::move(times);
    n->values = std::move(values);
    return Schedule(std::move(n));
}

namespace {

std::shared_ptr<Schedule::Node> combinator(ScheduleKind kind, std::vector<Schedule> children) {
    auto n = std::make_shared<Schedule::Node>();
    n->kind = kind;
    n->lo = 0.0;
    n->hi = std::numeric_limits<double>::infinity();
    for (const auto &c : children) {
        n->lo = std::max(n->lo, c.t_min());
        n->hi = std::min(n->hi, c.t_max());
    }
    n->children = std::move(children);
    return n;
}

}  // namespace

Schedule Schedule::operator+(const Schedule &other) const {
    return Schedule(combinator(ScheduleKind::Sum, {*this, other}));
}

Schedule Schedule::operator-(const Schedule &other) const {
    return *this + other.scaled(-1.0);
}

Schedule Schedule::scaled(double factor) const {
    auto n = combinator(ScheduleKind::Scaled, {*this});
    n->a = factor;
    return Schedule(std::move(n));
}

Schedule Schedule::derivative() const {
    return Schedule(combinator(ScheduleKind::Derivative, {*this}));
}

Schedule Schedule::cos() const {
    return Schedule(combinator(ScheduleKind::Cos, {*this}));
}

Schedule Schedule::sin() const {
    return Schedule(combinator(ScheduleKind::Sin, {*this}));
}

ScheduleKind Schedule::kind() const {
    return node_->kind;
}

double Schedule::t_min() const {
    return node_->lo;
}

double Schedule::t_max() const {
    return node_->hi;
}

bool Schedule::contains(double t) const {
    double slack = domain_slack(node_->hi);
    return t >= node_->lo - slack && t <= node_->hi + slack;
}

std::optional<double> Schedule::constant_value() const {
    if (node_->kind == ScheduleKind::Constant) {
        return node_->a;
    }
    return std::nullopt;
}

std::optional<double> Schedule::harmonic_rate() const {
    if (node_->kind == ScheduleKind::Harmonic) {
        return node_->a;
    }
    return std::nullopt;
}

std::optional<double> Schedule::fd_step() const {
    if (node_->kind == ScheduleKind::Tabulated) {
        return node_->h_fd;
    }
    return std::nullopt;
}

std::vector<double> Schedule::parameters() const {
    switch (node_->kind) {
        case ScheduleKind::Constant:
        case ScheduleKind::Harmonic:
            return {node_->a};
        case ScheduleKind::LinearRamp:
        case ScheduleKind::CosineRamp:
            return {node_->a, node_->b, node_->duration};
        default:
            return {};
    }
}

const std::vector<double> &Schedule::sample_times() const {
    return node_->kind == ScheduleKind::Tabulated ? node_->times : kEmpty;
}

const std::vector<double> &Schedule::sample_values() const {
    return node_->kind == ScheduleKind::Tabulated ? node_->values : kEmpty;
}

std::string Schedule::describe() const {
    std::ostringstream out;
    out.precision(17);
    const Node &n = *node_;
    switch (n.kind) {
        case ScheduleKind::Constant:
            out << "constant(" << n.a << ")";
            break;
        case ScheduleKind::Harmonic:
            out << "harmonic(" << n.a << ")";
            break;
        case ScheduleKind::LinearRamp:
        case ScheduleKind::CosineRamp:
            out << schedule_kind_name(n.kind) << "(" << n.a << "->" << n.b << " over " << n.duration << ")";
            break;
        case ScheduleKind::Tabulated:
            out << "tabulated(" << n.times.size() << " samples)";
            break;
        case ScheduleKind::Scaled:
            out << n.a << "*" << n.children[0].describe();
            break;
        case ScheduleKind::Sum:
            out << "(" << n.children[0].describe() << " + " << n.children[1].describe() << ")";
            break;
        default:
            out << schedule_kind_name(n.kind) << "(" << n.children[0].describe() << ")";
            break;
    }
    return out.str();
}

double Schedule::eval(double t) const {
    if (!contains(t)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "schedule " << describe() << " evaluated at t=" << t << " outside its domain [" << node_->lo << ", "
            << node_->hi << "]";
        throw std::out_of_range(msg.str());
    }
    return value(std::clamp(t, node_->lo, node_->hi), 0);
}

double Schedule::eval_derivative(double t) const {
    if (!contains(t)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "schedule " << describe() << " differentiated at t=" << t << " outside its domain";
        throw std::out_of_range(msg.str());
    }
    return value(std::clamp(t, node_->lo, node_->hi), 1);
}

double Schedule::value(double t, int order) const {
    const Node &n = *node_;
    switch (n.kind) {
        case ScheduleKind::Constant:
            return order == 0 ? n.a : 0.0;
        case ScheduleKind::Harmonic:
            return order == 0 ? n.a * t : (order == 1 ? n.a : 0.0);
        case ScheduleKind::LinearRamp:
            if (order == 0) {
                // Exact endpoints: t == duration yields b without rounding.
                if (t >= n.duration) {
                    return n.b;
                }
                return n.a + (n.b - n.a) * (t / n.duration);
            }
            return order == 1 ? (n.b - n.a) / n.duration : 0.0;
        case ScheduleKind::CosineRamp: {
            if (order == 0) {
                return n.a + (n.b - n.a) * 0.5 * (1.0 - std::cos(kPi * t / n.duration));
            }
            // d^k/dt^k of -cos(w t)/2 for w = pi / duration.
            double w = kPi / n.duration;
            double amp = 0.5 * (n.b - n.a) * std::pow(w, order);
            switch (order % 4) {
                case 1:
                    return amp * std::sin(w * t);
                case 2:
                    return amp * std::cos(w * t);
                case 3:
                    return -amp * std::sin(w * t);
                default:
                    return -amp * std::cos(w * t);
            }
        }
        case ScheduleKind::Tabulated: {
            if (order == 0) {
                return spline_eval(n, t);
            }
            // Central difference, falling back to second-order one-sided stencils at the ends.
            double h = n.h_fd;
            if (t - h >= n.lo && t + h <= n.hi) {
                return (value(t + h, order - 1) - value(t - h, order - 1)) / (2.0 * h);
            }
            if (t - h < n.lo) {
                return (-3.0 * value(t, order - 1) + 4.0 * value(t + h, order - 1) - value(t + 2.0 * h, order - 1)) /
                       (2.0 * h);
            }
            return (3.0 * value(t, order - 1) - 4.0 * value(t - h, order - 1) + value(t - 2.0 * h, order - 1)) /
                   (2.0 * h);
        }
        case ScheduleKind::Sum:
            return n.children[0].value(t, order) + n.children[1].value(t, order);
        case ScheduleKind::Scaled:
            return n.a * n.children[0].value(t, order);
        case ScheduleKind::Derivative:
            return n.children[0].value(t, order + 1);
        case ScheduleKind::Cos:
        case ScheduleKind::Sin: {
            const Schedule &f = n.children[0];
            double f0 = f.value(t, 0);
            double c = std::cos(f0);
            double s = std::sin(f0);
            bool is_cos = n.kind == ScheduleKind::Cos;
            if (order == 0) {
                return is_cos ? c : s;
            }
            double f1 = f.value(t, 1);
            if (order == 1) {
                return is_cos ? -s * f1 : c * f1;
            }
            if (order == 2) {
                double f2 = f.value(t, 2);
                return is_cos ? -c * f1 * f1 - s * f2 : -s * f1 * f1 + c * f2;
            }
            throw std::logic_error("schedule: derivatives above second order of cos/sin are not supported");
        }
    }
    throw std::logic_error("schedule: unknown kind");
}

NmrParams NmrParams::harmonic(double omega0, double omega, double g) {
    NmrParams p;
    p.omega0 = Schedule::constant(omega0);
    p.g = g;
    p.phi = Schedule::harmonic(omega);
    p.theta = Schedule::harmonic(omega - omega0);
    p.validate();
    return p;
}

void NmrParams::validate() const {
    if (!(g > 0.0) || !std::isfinite(g)) {
        throw std::invalid_argument("NmrParams: drive strength g must be positive and finite");
    }
}

bool NmrParams::is_harmonic() const {
    return omega0.constant_value().has_value() && phi.harmonic_rate().has_value();
}

double NmrParams::omega() const {
    if (!is_harmonic()) {
        throw std::invalid_argument("NmrParams: closed forms need phi(t) = omega t and constant omega0");
    }
    return *phi.harmonic_rate();
}

double NmrParams::detuning() const {
    return omega() - *omega0.constant_value();
}

}  // namespace hamxform
