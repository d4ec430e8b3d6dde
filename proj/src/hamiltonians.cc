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

#include "hamxform/hamiltonians.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hamxform {

TimeDependentHamiltonian::TimeDependentHamiltonian(
    int n_qubits, std::vector<HamiltonianTerm> terms, std::vector<ConjugatedTerm> conjugated, std::string label)
    : n_qubits_(n_qubits), terms_(std::move(terms)), conjugated_(std::move(conjugated)), label_(std::move(label)) {
    require_qubit_count(n_qubits_);
    t_min_ = 0.0;
    t_max_ = std::numeric_limits<double>::infinity();
    for (const auto &term : terms_) {
        if (term.pauli.min_qubits() > n_qubits_) {
            throw std::invalid_argument("term " + term.pauli.str() + " does not fit in the register");
        }
        t_min_ = std::max(t_min_, term.coefficient.t_min());
        t_max_ = std::min(t_max_, term.coefficient.t_max());
    }
    for (const auto &term : conjugated_) {
        if (term.z_string.min_qubits() > n_qubits_) {
            throw std::invalid_argument("conjugated term " + term.z_string.str() + " does not fit in the register");
        }
        for (const auto &f : term.z_string.factors()) {
            if (f.axis != Axis::Z) {
                throw std::invalid_argument("conjugated terms must be products of Z operators");
            }
        }
        t_min_ = std::max(t_min_, term.phase.t_min());
        t_max_ = std::min(t_max_, term.phase.t_max());
    }
    if (t_min_ > t_max_) {
        throw std::invalid_argument("Hamiltonian terms have disjoint time domains");
    }
}

bool TimeDependentHamiltonian::contains(double t) const {
    double slack = 1e-12 * std::max(1.0, std::isfinite(t_max_) ? std::abs(t_max_) : 1.0);
    return t >= t_min_ - slack && t <= t_max_ + slack;
}

DenseOperator TimeDependentHamiltonian::eval(double t) const {
    if (!contains(t)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "Hamiltonian '" << label_ << "' evaluated at t=" << t << " outside [" << t_min_ << ", " << t_max_
            << "]";
        throw std::out_of_range(msg.str());
    }
    DenseOperator h = DenseOperator::Zero(dim(), dim());
    for (const auto &term : terms_) {
        double c = term.coefficient.eval(t);
        if (c != 0.0) {
            accumulate(h, term.pauli, n_qubits_, c);
        }
    }
    for (const auto &term : conjugated_) {
        double phi = term.phase.eval(t);
        double cz = std::cos(2.0 * phi);
        double cy = -std::sin(2.0 * phi);
        const auto &zs = term.z_string.factors();
        const std::size_t support = zs.size();
        // Expand prod_q (cz Z_q + cy Y_q) over the support.
        for (std::size_t mask = 0; mask < (std::size_t{1} << support); mask++) {
            std::vector<PauliFactor> factors;
            factors.reserve(support);
            double weight = term.z_string.coefficient();
            for (std::size_t k = 0; k < support; k++) {
                bool y = (mask >> k) & 1;
                factors.push_back({zs[k].qubit, y ? Axis::Y : Axis::Z});
                weight *= y ? cy : cz;
            }
            if (weight != 0.0) {
                accumulate(h, PauliString(std::move(factors), weight), n_qubits_);
            }
        }
    }
    return h;
}

TimeDependentHamiltonian TimeDependentHamiltonian::scaled(double factor) const {
    std::vector<HamiltonianTerm> terms;
    terms.reserve(terms_.size());
    for (const auto &term : terms_) {
        terms.push_back({term.coefficient, term.pauli.scaled(factor)});
    }
    std::vector<ConjugatedTerm> conjugated;
    conjugated.reserve(conjugated_.size());
    for (const auto &term : conjugated_) {
        conjugated.push_back({term.z_string.scaled(factor), term.phase});
    }
    std::ostringstream label;
    label.precision(17);
    label << factor << "*(" << label_ << ")";
    return TimeDependentHamiltonian(n_qubits_, std::move(terms), std::move(conjugated), label.str());
}

TimeDependentHamiltonian TimeDependentHamiltonian::with_term(
    Schedule coefficient, PauliString pauli, std::string label) const {
    auto terms = terms_;
    terms.push_back({std::move(coefficient), std::move(pauli)});
    return TimeDependentHamiltonian(n_qubits_, std::move(terms), conjugated_, std::move(label));
}

void IsingProblem::add_coupling(int i, int j, double value) {
    if (i == j) {
        throw std::invalid_argument("Ising coupling on the diagonal (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
    auto key = std::minmax(i, j);
    if (!couplings.emplace(std::pair<int, int>(key.first, key.second), value).second) {
        throw std::invalid_argument(
            "duplicate Ising coupling (" + std::to_string(key.first) + "," + std::to_string(key.second) + ")");
    }
}

void IsingProblem::validate() const {
    require_qubit_count(n_qubits);
    if (static_cast<int>(fields.size()) != n_qubits) {
        throw std::invalid_argument("Ising problem needs one field per qubit");
    }
    for (const auto &[key, value] : couplings) {
        if (key.first == key.second) {
            throw std::invalid_argument("Ising coupling on the diagonal");
        }
        if (key.first < 0 || key.second >= n_qubits || key.first > key.second) {
            throw std::invalid_argument("Ising coupling index out of range");
        }
        if (!std::isfinite(value)) {
            throw std::invalid_argument("Ising coupling is not finite");
        }
    }
}

IsingProblem IsingProblem::parse(std::istream &in) {
    IsingProblem problem;
    std::map<int, double> fields;
    std::string line;
    int line_number = 0;
    int max_index = -1;
    while (std::getline(in, line)) {
        line_number++;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.resize(hash);
        }
        std::istringstream fields_in(line);
        std::vector<std::string> tokens;
        for (std::string tok; fields_in >> tok;) {
            tokens.push_back(tok);
        }
        if (tokens.empty()) {
            continue;
        }
        auto fail = [&](const std::string &why) {
            throw std::invalid_argument("Ising file line " + std::to_string(line_number) + ": " + why);
        };
        try {
            std::size_t used = 0;
            auto as_index = [&](const std::string &tok) {
                int v = -1;
                try {
                    v = std::stoi(tok, &used);
                } catch (const std::logic_error &) {
                    fail("bad qubit index '" + tok + "'");
                }
                if (used != tok.size() || v < 0) {
                    fail("bad qubit index '" + tok + "'");
                }
                return v;
            };
            auto as_real = [&](const std::string &tok) {
                double v = 0.0;
                try {
                    v = std::stod(tok, &used);
                } catch (const std::logic_error &) {
                    fail("bad number '" + tok + "'");
                }
                if (used != tok.size()) {
                    fail("bad number '" + tok + "'");
                }
                return v;
            };
            if (tokens.size() == 2) {
                int i = as_index(tokens[0]);
                if (!fields.emplace(i, as_real(tokens[1])).second) {
                    fail("duplicate field for qubit " + tokens[0]);
                }
                max_index = std::max(max_index, i);
            } else if (tokens.size() == 3) {
                int i = as_index(tokens[0]);
                int j = as_index(tokens[1]);
                problem.add_coupling(i, j, as_real(tokens[2]));
                max_index = std::max({max_index, i, j});
            } else {
                fail("expected `i h_i` or `i j J_ij`");
            }
        } catch (const std::invalid_argument &e) {
            std::string what = e.what();
            if (what.rfind("Ising file line", 0) == 0) {
                throw;
            }
            fail(what);
        } catch (const std::out_of_range &) {
            fail("number out of range");
        }
    }
    problem.n_qubits = max_index + 1;
    problem.fields.assign(static_cast<std::size_t>(std::max(0, problem.n_qubits)), 0.0);
    for (const auto &[i, v] : fields) {
        problem.fields[static_cast<std::size_t>(i)] = v;
    }
    problem.validate();
    return problem;
}

IsingProblem IsingProblem::load(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open Ising problem file '" + path + "'");
    }
    return parse(in);
}

IsingProblem IsingProblem::chain(int n_qubits, double field, double coupling) {
    IsingProblem p;
    p.n_qubits = n_qubits;
    p.fields.assign(static_cast<std::size_t>(n_qubits), field);
    for (int i = 0; i + 1 < n_qubits; i++) {
        p.add_coupling(i, i + 1, coupling);
    }
    p.validate();
    return p;
}

void GroverProblem::validate() const {
    require_qubit_count(n_qubits);
    if (marked >= (std::size_t{1} << n_qubits)) {
        throw std::invalid_argument(
            "marked state " + std::to_string(marked) + " does not fit in " + std::to_string(n_qubits) + " qubits");
    }
}

int problem_qubits(const Problem &problem) {
    return std::visit([](const auto &p) { return p.n_qubits; }, problem);
}

std::vector<PauliString> problem_terms(const Problem &problem) {
    std::vector<PauliString> out;
    if (const auto *ising = std::get_if<IsingProblem>(&problem)) {
        ising->validate();
        for (int i = 0; i < ising->n_qubits; i++) {
            double h = ising->fields[static_cast<std::size_t>(i)];
            if (h != 0.0) {
                out.push_back(PauliString::single(i, Axis::Z, h));
            }
        }
        for (const auto &[key, j] : ising->couplings) {
            if (j != 0.0) {
                out.push_back(PauliString({{key.first, Axis::Z}, {key.second, Axis::Z}}, j));
            }
        }
        return out;
    }
    const auto &grover = std::get<GroverProblem>(problem);
    grover.validate();
    const int n = grover.n_qubits;
    const double weight = std::ldexp(1.0, -n);
    // I - prod_i (I + s_i Z_i)/2 with s_i = (-1)^{b_i}; the empty subset merges into I.
    out.push_back(PauliString::identity(1.0 - weight));
    for (std::size_t subset = 1; subset < (std::size_t{1} << n); subset++) {
        std::vector<PauliFactor> factors;
        double sign = -1.0;
        for (int q = 0; q < n; q++) {
            std::size_t bit = std::size_t{1} << (n - 1 - q);
            if (subset & bit) {
                factors.push_back({q, Axis::Z});
                if (grover.marked & bit) {
                    sign = -sign;
                }
            }
        }
        out.push_back(PauliString(std::move(factors), sign * weight));
    }
    return out;
}

DenseOperator problem_matrix(const Problem &problem) {
    int n = problem_qubits(problem);
    require_qubit_count(n);
    auto dim = Eigen::Index{1} << n;
    DenseOperator m = DenseOperator::Zero(dim, dim);
    for (const auto &term : problem_terms(problem)) {
        accumulate(m, term, n);
    }
    return m;
}

double default_gamma0(const Problem &problem) {
    double scale = 1.0;
    if (const auto *ising = std::get_if<IsingProblem>(&problem)) {
        for (double h : ising->fields) {
            scale = std::max(scale, std::abs(h));
        }
        for (const auto &[key, j] : ising->couplings) {
            scale = std::max(scale, std::abs(j));
        }
    }
    return 2.0 * scale;
}

TimeDependentHamiltonian build_nmr(const NmrParams &p) {
    p.validate();
    std::vector<HamiltonianTerm> terms{
        {p.omega0.scaled(0.5), PauliString::single(0, Axis::Z)},
        {p.phi.cos().scaled(p.g), PauliString::single(0, Axis::X)},
        {p.phi.sin().scaled(p.g), PauliString::single(0, Axis::Y)},
    };
    return TimeDependentHamiltonian(1, std::move(terms), {}, "nmr");
}

TimeDependentHamiltonian build_rotating_frame(const NmrParams &p) {
    p.validate();
    Schedule z_coefficient = (p.omega0 + p.theta.derivative() - p.phi.derivative()).scaled(0.5);
    std::vector<HamiltonianTerm> terms{
        {z_coefficient, PauliString::single(0, Axis::Z)},
        {p.theta.cos().scaled(p.g), PauliString::single(0, Axis::X)},
        {p.theta.sin().scaled(p.g), PauliString::single(0, Axis::Y)},
    };
    return TimeDependentHamiltonian(1, std::move(terms), {}, "nmr-rotating-frame");
}

namespace {

std::vector<HamiltonianTerm> transverse_terms(const Schedule &coefficient, int n) {
    std::vector<HamiltonianTerm> terms;
    for (int q = 0; q < n; q++) {
        terms.push_back({coefficient, PauliString::single(q, Axis::X)});
    }
    return terms;
}

}  // namespace

TimeDependentHamiltonian build_aqc(const Schedule &gamma, const Problem &problem) {
    int n = problem_qubits(problem);
    auto terms = transverse_terms(gamma, n);
    Schedule one = Schedule::constant(1.0);
    for (auto &p : problem_terms(problem)) {
        terms.push_back({one, std::move(p)});
    }
    return TimeDependentHamiltonian(n, std::move(terms), {}, "aqc");
}

TimeDependentHamiltonian build_fast_counterpart(const Schedule &gamma, const Problem &problem, const Schedule &phi) {
    int n = problem_qubits(problem);
    auto terms = transverse_terms(gamma + phi.derivative(), n);
    std::vector<ConjugatedTerm> conjugated;
    Schedule one = Schedule::constant(1.0);
    for (auto &p : problem_terms(problem)) {
        if (p.is_identity()) {
            terms.push_back({one, std::move(p)});
        } else {
            conjugated.push_back({std::move(p), phi});
        }
    }
    return TimeDependentHamiltonian(n, std::move(terms), std::move(conjugated), "aqc-fast-counterpart");
}

std::pair<Eigen::Index, Eigen::Index> Eigensystem::cluster(Eigen::Index k) const {
    Eigen::Index first = k;
    Eigen::Index last = k + 1;
    while (first > 0 && energies(first) - energies(first - 1) < kDegeneracyTolerance) {
        first--;
    }
    while (last < energies.size() && energies(last) - energies(last - 1) < kDegeneracyTolerance) {
        last++;
    }
    return {first, last};
}

Eigensystem eigensystem(const DenseOperator &hermitian) {
    require_hermitian(hermitian, "eigensystem");
    DenseOperator sym = 0.5 * (hermitian + hermitian.adjoint());
    Eigen::SelfAdjointEigenSolver<DenseOperator> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigensystem: eigendecomposition failed");
    }
    Eigensystem es;
    es.energies = solver.eigenvalues();
    es.states = solver.eigenvectors();
    if (es.energies.size() > 1) {
        es.gap = es.energies(1) - es.energies(0);
    }
    es.degenerate = es.energies.size() > 1 && es.gap < kDegeneracyTolerance;
    es.ground_multiplicity = static_cast<int>(es.cluster(0).second);
    return es;
}

Eigensystem instantaneous_eigensystem(const TimeDependentHamiltonian &h, double t) {
    return eigensystem(h.eval(t));
}

}  // namespace hamxform
