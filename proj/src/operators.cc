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

#include "hamxform/operators.h"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <iterator>
#include <sstream>
#include <stdexcept>

namespace hamxform {

namespace {

constexpr Complex kI{0.0, 1.0};

// Powers of i indexed by (count mod 4).
constexpr Complex kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

std::size_t qubit_bit(int qubit, int n_qubits) {
    return std::size_t{1} << (n_qubits - 1 - qubit);
}

}  // namespace

char axis_name(Axis axis) {
    switch (axis) {
        case Axis::X:
            return 'X';
        case Axis::Y:
            return 'Y';
        case Axis::Z:
            return 'Z';
    }
    return '?';
}

Axis parse_axis(char c) {
    switch (c) {
        case 'X':
        case 'x':
            return Axis::X;
        case 'Y':
        case 'y':
            return Axis::Y;
        case 'Z':
        case 'z':
            return Axis::Z;
        default:
            throw std::invalid_argument(std::string("unknown Pauli axis '") + c + "'");
    }
}

PauliString::PauliString(std::vector<PauliFactor> factors, double coefficient)
    : factors_(std::move(factors)), coefficient_(coefficient) {
    for (std::size_t k = 0; k < factors_.size(); k++) {
        if (factors_[k].qubit < 0) {
            throw std::invalid_argument("Pauli factor has a negative qubit index");
        }
        if (k > 0 && factors_[k].qubit <= factors_[k - 1].qubit) {
            throw std::invalid_argument("Pauli factors must have strictly increasing qubit indices");
        }
    }
}

PauliString PauliString::identity(double coefficient) {
    return PauliString({}, coefficient);
}

PauliString PauliString::single(int qubit, Axis axis, double coefficient) {
    return PauliString({{qubit, axis}}, coefficient);
}

PauliString PauliString::parse(std::string_view text, double coefficient) {
    std::vector<PauliFactor> factors;
    std::size_t k = 0;
    while (k < text.size()) {
        char c = text[k];
        if (std::isspace(static_cast<unsigned char>(c)) || c == '*') {
            k++;
            continue;
        }
        if (c == 'I' || c == 'i') {
            k++;
            continue;
        }
        Axis axis = parse_axis(c);
        k++;
        std::size_t start = k;
        while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
            k++;
        }
        if (start == k) {
            throw std::invalid_argument("Pauli factor '" + std::string(1, c) + "' is missing a qubit index");
        }
        factors.push_back({std::stoi(std::string(text.substr(start, k - start))), axis});
    }
    std::sort(factors.begin(), factors.end(), [](const PauliFactor &a, const PauliFactor &b) {
        return a.qubit < b.qubit;
    });
    return PauliString(std::move(factors), coefficient);
}

int PauliString::min_qubits() const {
    return factors_.empty() ? 0 : factors_.back().qubit + 1;
}

PauliString PauliString::scaled(double factor) const {
    return PauliString(factors_, coefficient_ * factor);
}

PauliString PauliString::disjoint_product(const PauliString &other) const {
    std::vector<PauliFactor> merged;
    merged.reserve(factors_.size() + other.factors_.size());
    std::merge(
        factors_.begin(), factors_.end(), other.factors_.begin(), other.factors_.end(), std::back_inserter(merged),
        [](const PauliFactor &a, const PauliFactor &b) { return a.qubit < b.qubit; });
    for (std::size_t k = 1; k < merged.size(); k++) {
        if (merged[k].qubit == merged[k - 1].qubit) {
            throw std::invalid_argument("disjoint_product: strings overlap on qubit " + std::to_string(merged[k].qubit));
        }
    }
    return PauliString(std::move(merged), coefficient_ * other.coefficient_);
}

std::string PauliString::str() const {
    std::ostringstream out;
    out.precision(17);
    out << coefficient_ << " * ";
    if (factors_.empty()) {
        out << "I";
    }
    for (std::size_t k = 0; k < factors_.size(); k++) {
        if (k) {
            out << ' ';
        }
        out << axis_name(factors_[k].axis) << factors_[k].qubit;
    }
    return out.str();
}

DenseOperator pauli_matrix(Axis axis) {
    DenseOperator m(2, 2);
    switch (axis) {
        case Axis::X:
            m << 0, 1, 1, 0;
            break;
        case Axis::Y:
            m << 0, -kI, kI, 0;
            break;
        case Axis::Z:
            m << 1, 0, 0, -1;
            break;
    }
    return m;
}

void require_qubit_count(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw std::invalid_argument(
            "qubit count " + std::to_string(n_qubits) + " outside supported range [1, " + std::to_string(kMaxQubits) +
            "] for dense storage");
    }
}

void accumulate(DenseOperator &target, const PauliString &string, int n_qubits, double scale) {
    require_qubit_count(n_qubits);
    if (string.min_qubits() > n_qubits) {
        throw std::invalid_argument(
            "Pauli string " + string.str() + " does not fit in " + std::to_string(n_qubits) + " qubits");
    }
    const std::size_t dim = std::size_t{1} << n_qubits;
    if (static_cast<std::size_t>(target.rows()) != dim || static_cast<std::size_t>(target.cols()) != dim) {
        throw std::invalid_argument("accumulate: target dimension does not match qubit count");
    }

    // Each Pauli string is a signed permutation: row r = c ^ flip_mask, with a
    // phase i^{#Y} * (-1)^{popcount(c & phase_mask)}.
    std::size_t flip_mask = 0;
    std::size_t phase_mask = 0;
    int y_count = 0;
    for (const auto &f : string.factors()) {
        std::size_t bit = qubit_bit(f.qubit, n_qubits);
        if (f.axis != Axis::Z) {
            flip_mask |= bit;
        }
        if (f.axis != Axis::X) {
            phase_mask |= bit;
        }
        if (f.axis == Axis::Y) {
            y_count++;
        }
    }
    const Complex base = kIPowers[y_count % 4] * (string.coefficient() * scale);
    for (std::size_t col = 0; col < dim; col++) {
        std::size_t row = col ^ flip_mask;
        Complex v = (std::popcount(col & phase_mask) & 1) ? -base : base;
        target(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += v;
    }
}

DenseOperator embed(const PauliString &string, int n_qubits) {
    require_qubit_count(n_qubits);
    auto dim = Eigen::Index{1} << n_qubits;
    DenseOperator result = DenseOperator::Zero(dim, dim);
    accumulate(result, string, n_qubits);
    return result;
}

double hermitian_defect(const DenseOperator &a) {
    return (a - a.adjoint()).norm();
}

double unitarity_defect(const DenseOperator &a) {
    return (a.adjoint() * a - DenseOperator::Identity(a.rows(), a.cols())).norm();
}

void require_hermitian(const DenseOperator &a, std::string_view what) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument(std::string(what) + ": operator is not square");
    }
    double tolerance = 1e-12 * static_cast<double>(a.rows()) * std::max(1.0, a.norm());
    double defect = hermitian_defect(a);
    if (!(defect <= tolerance)) {
        std::ostringstream msg;
        msg << what << ": operator is not Hermitian (defect " << defect << " > " << tolerance << ")";
        throw std::invalid_argument(msg.str());
    }
}

void require_unitary(const DenseOperator &a, std::string_view what, double tolerance) {
    double defect = unitarity_defect(a);
    if (!(defect <= tolerance)) {
        std::ostringstream msg;
        msg << what << ": operator is not unitary (defect " << defect << " > " << tolerance << ")";
        throw std::domain_error(msg.str());
    }
}

DenseOperator herm_expm(const DenseOperator &generator, double scale) {
    require_hermitian(generator, "herm_expm");
    // The solver reads only the lower triangle; symmetrize so the result does not
    // depend on which triangle carried rounding noise.
    DenseOperator sym = 0.5 * (generator + generator.adjoint());
    Eigen::SelfAdjointEigenSolver<DenseOperator> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("herm_expm: eigendecomposition failed");
    }
    Eigen::VectorXcd phases = (solver.eigenvalues().cast<Complex>() * (-kI * scale)).array().exp();
    const auto &v = solver.eigenvectors();
    DenseOperator e = v * phases.asDiagonal() * v.adjoint();
    // One Newton-Schulz step toward the nearest unitary: removes the O(eps * dim) defect
    // of the eigenvectors so that long products stay unitary.
    DenseOperator gram = e.adjoint() * e;
    return 0.5 * e * (3.0 * DenseOperator::Identity(e.rows(), e.cols()) - gram);
}

PhaseAlignedDistance phase_aligned_distance(const DenseOperator &a, const DenseOperator &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("phase_aligned_distance: dimension mismatch");
    }
    PhaseAlignedDistance result;
    Complex overlap = (b.adjoint() * a).trace();
    double scale = a.norm() * b.norm();
    if (std::abs(overlap) <= 1e-14 * std::max(scale, 1e-300)) {
        result.phase_fallback = true;
        result.distance = (a - b).norm();
        return result;
    }
    result.phase = std::arg(overlap);
    result.distance = (a - std::polar(1.0, result.phase) * b).norm();
    return result;
}

double fidelity(const StateVector &a, const StateVector &b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("fidelity: dimension mismatch");
    }
    for (const StateVector *s : {&a, &b}) {
        if (std::abs(s->squaredNorm() - 1.0) > 1e-10) {
            throw std::invalid_argument("fidelity: state is not normalized");
        }
    }
    // Divide out the residual norm drift so the value is a ray overlap in [0, 1].
    return std::min(1.0, std::norm(a.dot(b)) / (a.squaredNorm() * b.squaredNorm()));
}

int qubits_for_dimension(Eigen::Index dim) {
    if (dim < 2 || !std::has_single_bit(static_cast<std::size_t>(dim))) {
        throw std::invalid_argument("dimension " + std::to_string(dim) + " is not a power of two");
    }
    return std::countr_zero(static_cast<std::size_t>(dim));
}

StateVector basis_state(int n_qubits, std::size_t index) {
    require_qubit_count(n_qubits);
    std::size_t dim = std::size_t{1} << n_qubits;
    if (index >= dim) {
        throw std::invalid_argument("basis index " + std::to_string(index) + " out of range");
    }
    StateVector s = StateVector::Zero(static_cast<Eigen::Index>(dim));
    s(static_cast<Eigen::Index>(index)) = 1.0;
    return s;
}

StateVector minus_state(int n_qubits) {
    require_qubit_count(n_qubits);
    std::size_t dim = std::size_t{1} << n_qubits;
    StateVector s(static_cast<Eigen::Index>(dim));
    double amp = std::pow(2.0, -0.5 * n_qubits);
    for (std::size_t k = 0; k < dim; k++) {
        s(static_cast<Eigen::Index>(k)) = (std::popcount(k) & 1) ? -amp : amp;
    }
    return s;
}

StateVector plus_state(int n_qubits) {
    require_qubit_count(n_qubits);
    auto dim = Eigen::Index{1} << n_qubits;
    return StateVector::Constant(dim, std::pow(2.0, -0.5 * n_qubits));
}

}  // namespace hamxform
