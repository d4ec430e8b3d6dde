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

// Independent reference computations for tests. Nothing here calls into the
// library's matrix exponential, Pauli embedding or propagators.

#ifndef HAMXFORM_TESTING_ORACLES_H
#define HAMXFORM_TESTING_ORACLES_H

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hamxform::testing {

using Mat = Eigen::MatrixXcd;
using Cplx = std::complex<double>;

inline Mat pauli2(char axis) {
    Mat m(2, 2);
    const Cplx i{0, 1};
    switch (axis) {
        case 'X':
            m << 0, 1, 1, 0;
            break;
        case 'Y':
            m << 0, -i, i, 0;
            break;
        case 'Z':
            m << 1, 0, 0, -1;
            break;
        default:
            m = Mat::Identity(2, 2);
    }
    return m;
}

inline Mat kron(const Mat &a, const Mat &b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); r++) {
        for (Eigen::Index c = 0; c < a.cols(); c++) {
            out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
        }
    }
    return out;
}

/// Tensor product with qubit 0 leftmost; `letters[q]` in {I, X, Y, Z}.
inline Mat kron_string(const std::string &letters) {
    Mat out = Mat::Identity(1, 1);
    for (char c : letters) {
        out = kron(out, pauli2(c));
    }
    return out;
}

/// exp(-i s G) by scaling and squaring of a Taylor series.
inline Mat taylor_expm(const Mat &g, double s) {
    const Cplx i{0, 1};
    Mat a = -i * s * g;
    int squarings = 0;
    double norm = a.norm();
    while (norm > 0.25) {
        a /= 2.0;
        norm /= 2.0;
        squarings++;
    }
    Mat term = Mat::Identity(g.rows(), g.cols());
    Mat sum = term;
    for (int k = 1; k < 30; k++) {
        term = term * a / static_cast<double>(k);
        sum += term;
    }
    for (int k = 0; k < squarings; k++) {
        sum = sum * sum;
    }
    return sum;
}

/// Classical RK4 for i dU/dt = H(t) U with U(t0) = I.
inline Mat rk4_propagator(const std::function<Mat(double)> &h, Eigen::Index dim, double t0, double t1, int steps) {
    const Cplx i{0, 1};
    Mat u = Mat::Identity(dim, dim);
    double dt = (t1 - t0) / steps;
    auto f = [&](double t, const Mat &y) -> Mat { return -i * (h(t) * y); };
    for (int k = 0; k < steps; k++) {
        double t = t0 + k * dt;
        Mat k1 = f(t, u);
        Mat k2 = f(t + dt / 2, u + dt / 2 * k1);
        Mat k3 = f(t + dt / 2, u + dt / 2 * k2);
        Mat k4 = f(t + dt, u + dt * k3);
        u += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return u;
}

/// min over phi of ||A - e^{i phi} B||_F by dense scan plus golden-section refinement.
inline double brute_phase_distance(const Mat &a, const Mat &b) {
    auto dist = [&](double phi) { return (a - std::polar(1.0, phi) * b).norm(); };
    const int scan = 720;
    double best_phi = 0.0;
    double best = dist(0.0);
    for (int k = 1; k < scan; k++) {
        double phi = 2 * std::numbers::pi * k / scan;
        double d = dist(phi);
        if (d < best) {
            best = d;
            best_phi = phi;
        }
    }
    double lo = best_phi - 2 * std::numbers::pi / scan;
    double hi = best_phi + 2 * std::numbers::pi / scan;
    const double ratio = (std::sqrt(5.0) - 1) / 2;
    for (int it = 0; it < 200; it++) {
        double m1 = hi - ratio * (hi - lo);
        double m2 = lo + ratio * (hi - lo);
        if (dist(m1) < dist(m2)) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    return std::min(best, dist(0.5 * (lo + hi)));
}

inline Mat random_hermitian(std::mt19937_64 &rng, Eigen::Index dim, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    Mat m(dim, dim);
    for (Eigen::Index r = 0; r < dim; r++) {
        for (Eigen::Index c = 0; c < dim; c++) {
            m(r, c) = Cplx(normal(rng), normal(rng));
        }
    }
    return 0.5 * (m + m.adjoint());
}

/// Least-squares slope of log(err) against log(h).
inline double loglog_slope(const std::vector<double> &h, const std::vector<double> &err) {
    double n = static_cast<double>(h.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < h.size(); k++) {
        double x = std::log(h[k]);
        double y = std::log(err[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace hamxform::testing

#endif
