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

#ifndef HAMXFORM_HAMILTONIANS_H
#define HAMXFORM_HAMILTONIANS_H

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hamxform/operators.h"
#include "hamxform/schedules.h"

namespace hamxform {

struct HamiltonianTerm {
    Schedule coefficient;
    PauliString pauli;
};

/// A Z-type Pauli string conjugated by the common frame rotation prod_i exp(-i phi X_i):
/// every Z_q becomes exp(-i phi X_q) Z_q exp(i phi X_q) = Z_q cos 2phi - Y_q sin 2phi.
struct ConjugatedTerm {
    PauliString z_string;
    Schedule phase;
};

/// H(t) = sum_k s_k(t) P_k + sum_j U_phi(t) Z_j U_phi(t)^dagger.
class TimeDependentHamiltonian {
   public:
    TimeDependentHamiltonian(
        int n_qubits, std::vector<HamiltonianTerm> terms, std::vector<ConjugatedTerm> conjugated = {},
        std::string label = {});

    int n_qubits() const { return n_qubits_; }
    Eigen::Index dim() const { return Eigen::Index{1} << n_qubits_; }
    const std::vector<HamiltonianTerm> &terms() const { return terms_; }
    const std::vector<ConjugatedTerm> &conjugated_terms() const { return conjugated_; }
    const std::string &label() const { return label_; }

    double t_min() const { return t_min_; }
    double t_max() const { return t_max_; }
    bool contains(double t) const;

    /// Hermitian matrix at time t. Throws std::out_of_range outside the domain.
    DenseOperator eval(double t) const;

    /// Every coefficient multiplied by `factor`.
    TimeDependentHamiltonian scaled(double factor) const;
    /// A copy with one more term.
    TimeDependentHamiltonian with_term(Schedule coefficient, PauliString pauli, std::string label) const;

   private:
    int n_qubits_;
    std::vector<HamiltonianTerm> terms_;
    std::vector<ConjugatedTerm> conjugated_;
    std::string label_;
    double t_min_ = 0.0;
    double t_max_ = 0.0;
};

/// h_P = sum_i h_i Z_i + sum_{i<j} J_ij Z_i Z_j. Each unordered coupling is counted once.
struct IsingProblem {
    int n_qubits = 0;
    std::vector<double> fields;
    std::map<std::pair<int, int>, double> couplings;

    /// Adds J for the unordered pair {i, j}; rejects i == j and duplicates.
    void add_coupling(int i, int j, double value);
    void validate() const;

    /// Plain-text edge list: `i h_i` and `i j J_ij` per line; `#` starts a comment.
    /// The qubit count is one more than the largest index mentioned.
    static IsingProblem parse(std::istream &in);
    static IsingProblem load(const std::string &path);
    /// Open chain with uniform field and nearest-neighbour coupling.
    static IsingProblem chain(int n_qubits, double field, double coupling);
};

/// h_P = I - |B><B| for the marked basis state B.
struct GroverProblem {
    int n_qubits = 0;
    std::size_t marked = 0;

    void validate() const;
};

using Problem = std::variant<IsingProblem, GroverProblem>;

int problem_qubits(const Problem &problem);

/// The problem Hamiltonian as Z-type Pauli strings (identity included when present).
/// Grover's projector is expanded as prod_i (I + (-1)^{b_i} Z_i) / 2.
std::vector<PauliString> problem_terms(const Problem &problem);

DenseOperator problem_matrix(const Problem &problem);

/// 2 * max(max|h_i|, max|J_ij|, 1).
double default_gamma0(const Problem &problem);

/// (omega0(t)/2) Z + g [X cos phi(t) + Y sin phi(t)].
TimeDependentHamiltonian build_nmr(const NmrParams &p);

/// ((omega0 + theta' - phi')/2) Z + g [X cos theta(t) + Y sin theta(t)].
TimeDependentHamiltonian build_rotating_frame(const NmrParams &p);

/// Gamma(t) sum_i X_i + h_P({Z_i}).
TimeDependentHamiltonian build_aqc(const Schedule &gamma, const Problem &problem);

/// (Gamma + phi') sum_i X_i + h_P({exp(-i phi X_i) Z_i exp(i phi X_i)}), common phase phi for all qubits.
TimeDependentHamiltonian build_fast_counterpart(const Schedule &gamma, const Problem &problem, const Schedule &phi);

struct Eigensystem {
    /// Ascending.
    Eigen::VectorXd energies;
    /// Orthonormal eigenvectors as columns, in the order of `energies`.
    DenseOperator states;
    /// E_1 - E_0 (zero for one-dimensional spaces).
    double gap = 0.0;
    /// Set when the ground gap is below kDegeneracyTolerance.
    bool degenerate = false;
    /// Number of levels within kDegeneracyTolerance of E_0.
    int ground_multiplicity = 1;

    StateVector state(Eigen::Index k) const { return states.col(k); }
    /// Index range [first, last) of the level cluster containing `k`.
    std::pair<Eigen::Index, Eigen::Index> cluster(Eigen::Index k) const;
};

inline constexpr double kDegeneracyTolerance = 1e-10;

Eigensystem eigensystem(const DenseOperator &hermitian);
Eigensystem instantaneous_eigensystem(const TimeDependentHamiltonian &h, double t);

}  // namespace hamxform

#endif
