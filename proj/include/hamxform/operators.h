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

#ifndef HAMXFORM_OPERATORS_H
#define HAMXFORM_OPERATORS_H

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hamxform {

using Complex = std::complex<double>;

/// Dense complex operator of dimension 2^n (row-major basis label |b0 b1 ... b_{n-1}>,
/// qubit 0 is the most significant bit of the index).
using DenseOperator = Eigen::MatrixXcd;

/// Complex amplitude vector of dimension 2^n.
using StateVector = Eigen::VectorXcd;

/// Hard limit on register size for dense storage.
inline constexpr int kMaxQubits = 10;

inline constexpr double kUnitaryTolerance = 1e-10;
inline constexpr double kUnitaryAbortTolerance = 1e-8;

enum class Axis { X, Y, Z };

char axis_name(Axis axis);
Axis parse_axis(char c);

struct PauliFactor {
    int qubit;
    Axis axis;

    bool operator==(const PauliFactor &) const = default;
};

/// A real-weighted tensor product of single-qubit Pauli factors. Factors are
/// kept sorted by strictly increasing qubit index; no factors means identity.
class PauliString {
   public:
    PauliString() = default;
    PauliString(std::vector<PauliFactor> factors, double coefficient = 1.0);

    static PauliString identity(double coefficient = 1.0);
    static PauliString single(int qubit, Axis axis, double coefficient = 1.0);

    /// Parses forms like "X0 Z2", "Z0Z1" or "I" (identity).
    static PauliString parse(std::string_view text, double coefficient = 1.0);

    const std::vector<PauliFactor> &factors() const { return factors_; }
    double coefficient() const { return coefficient_; }
    bool is_identity() const { return factors_.empty(); }

    /// Highest qubit index plus one (0 for the identity).
    int min_qubits() const;

    PauliString scaled(double factor) const;

    /// Product of two strings acting on disjoint qubits.
    /// Throws std::invalid_argument when supports overlap.
    PauliString disjoint_product(const PauliString &other) const;

    std::string str() const;

    bool operator==(const PauliString &) const = default;

   private:
    std::vector<PauliFactor> factors_;
    double coefficient_ = 1.0;
};

DenseOperator pauli_matrix(Axis axis);

/// coefficient * (tensor product of the string's factors, identity elsewhere).
DenseOperator embed(const PauliString &string, int n_qubits);

/// Adds `scale * embed(string, n_qubits)` into `target` without forming the dense
/// string. `target` must already be 2^n x 2^n.
void accumulate(DenseOperator &target, const PauliString &string, int n_qubits, double scale = 1.0);

/// exp(-i * scale * generator) for a Hermitian generator, via eigendecomposition.
DenseOperator herm_expm(const DenseOperator &generator, double scale);

struct PhaseAlignedDistance {
    double distance = 0.0;
    /// Global phase applied to B before subtracting.
    double phase = 0.0;
    /// Set when tr(B^dagger A) vanished and no phase could be aligned.
    bool phase_fallback = false;
};

/// Frobenius distance ||A - e^{i phi} B|| minimized over the global phase phi.
PhaseAlignedDistance phase_aligned_distance(const DenseOperator &a, const DenseOperator &b);

/// |<a|b>|^2 for normalized states.
double fidelity(const StateVector &a, const StateVector &b);

/// ||A - A^dagger||_F.
double hermitian_defect(const DenseOperator &a);
/// ||A^dagger A - I||_F.
double unitarity_defect(const DenseOperator &a);

/// Throws unless `a` is Hermitian within 1e-12 * dim (scaled by max(1, ||A||_F)).
void require_hermitian(const DenseOperator &a, std::string_view what);
/// Throws unless `a` is unitary within `tolerance`.
void require_unitary(const DenseOperator &a, std::string_view what, double tolerance = kUnitaryTolerance);

/// Number of qubits for a 2^n dimension; throws if `dim` is not a power of two.
int qubits_for_dimension(Eigen::Index dim);
void require_qubit_count(int n_qubits);

/// Computational basis state |index> on n qubits.
StateVector basis_state(int n_qubits, std::size_t index);
/// |->^{tensor n}, the ground state of sum_i X_i.
StateVector minus_state(int n_qubits);
/// |+>^{tensor n}.
StateVector plus_state(int n_qubits);

}  // namespace hamxform

#endif
