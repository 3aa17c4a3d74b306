// Copyright 2026 The symflow Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Independent oracles and hand-rolled random generators shared by the tests.
// Nothing here calls into the library's linear algebra beyond its types.
#pragma once
#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "symflow/estimators.hpp"
#include "symflow/natgrad.hpp"

namespace oracle {

using symflow::complex_t;
using symflow::ComplexMatrix;
using symflow::ComplexVector;
using symflow::RealMatrix;
using symflow::RealVector;

inline constexpr double kPi = std::numbers::pi;

inline ComplexMatrix pauli(char p) {
    ComplexMatrix m(2, 2);
    switch (p) {
    case 'X':
        m << 0, 1, 1, 0;
        break;
    case 'Y':
        m << 0, complex_t(0, -1), complex_t(0, 1), 0;
        break;
    case 'Z':
        m << 1, 0, 0, -1;
        break;
    default:
        m << 1, 0, 0, 1;
    }
    return m;
}

inline ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

/// Kronecker product of single-qubit Paulis, leftmost letter most significant.
inline ComplexMatrix word(const std::string &w) {
    ComplexMatrix m = ComplexMatrix::Identity(1, 1);
    for (char ch : w) {
        m = kron(m, pauli(ch));
    }
    return m;
}

inline ComplexVector kron(const ComplexVector &a, const ComplexVector &b) {
    ComplexVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

inline ComplexVector ket(const std::string &bits) {
    ComplexVector v = ComplexVector::Ones(1);
    const double r = 1.0 / std::sqrt(2.0);
    for (char ch : bits) {
        ComplexVector q(2);
        if (ch == '0') {
            q << 1, 0;
        } else if (ch == '1') {
            q << 0, 1;
        } else if (ch == '+') {
            q << r, r;
        } else {
            q << r, -r;
        }
        v = kron(v, q);
    }
    return v;
}

/// exp(m) by scaling and squaring of a Taylor series.
inline ComplexMatrix expm(const ComplexMatrix &m) {
    const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    double scaled = norm;
    while (scaled > 0.25) {
        scaled /= 2.0;
        ++squarings;
    }
    const ComplexMatrix a = m / std::pow(2.0, squarings);
    ComplexMatrix term = ComplexMatrix::Identity(m.rows(), m.cols());
    ComplexMatrix sum = term;
    for (int k = 1; k < 30; ++k) {
        term = term * a / static_cast<double>(k);
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) {
        sum = sum * sum;
    }
    return sum;
}

/// Real vectorization (real parts then imaginary parts) for rank computations.
inline RealVector realvec(const ComplexMatrix &m) {
    RealVector v(2 * m.size());
    for (Eigen::Index k = 0; k < m.size(); ++k) {
        v(k) = m.data()[k].real();
        v(m.size() + k) = m.data()[k].imag();
    }
    return v;
}

inline RealMatrix columns(const std::vector<ComplexMatrix> &ms) {
    if (ms.empty()) {
        return RealMatrix(0, 0);
    }
    RealMatrix out(2 * ms.front().size(), static_cast<Eigen::Index>(ms.size()));
    for (std::size_t k = 0; k < ms.size(); ++k) {
        out.col(static_cast<Eigen::Index>(k)) = realvec(ms[k]);
    }
    return out;
}

inline RealMatrix state_columns(const std::vector<ComplexVector> &vs, Eigen::Index dim) {
    RealMatrix out(2 * dim, static_cast<Eigen::Index>(vs.size()));
    for (std::size_t k = 0; k < vs.size(); ++k) {
        out.col(static_cast<Eigen::Index>(k)) = realvec(vs[k]);
    }
    return out;
}

inline Eigen::Index rank(const RealMatrix &m, double tol = 1e-9) {
    if (m.cols() == 0) {
        return 0;
    }
    Eigen::FullPivLU<RealMatrix> lu(m);
    lu.setThreshold(tol);
    return lu.rank();
}

/// Orthogonal projector onto the column span, via complete orthogonal decomposition.
inline RealMatrix span_projector(const RealMatrix &cols, Eigen::Index rows) {
    if (cols.cols() == 0) {
        return RealMatrix::Zero(rows, rows);
    }
    Eigen::JacobiSVD<RealMatrix> svd(cols, Eigen::ComputeThinU);
    const double smax = svd.singularValues()(0);
    Eigen::Index r = 0;
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
        if (svd.singularValues()(k) > 1e-9 * std::max(1.0, smax)) {
            ++r;
        }
    }
    const RealMatrix u = svd.matrixU().leftCols(r);
    return u * u.transpose();
}

/// Frobenius distance between the spans of two lists of matrices.
inline double span_distance(const std::vector<ComplexMatrix> &a, const std::vector<ComplexMatrix> &b,
                            Eigen::Index dim) {
    const Eigen::Index rows = 2 * dim * dim;
    const RealMatrix pa = a.empty() ? RealMatrix::Zero(rows, rows) : span_projector(columns(a), rows);
    const RealMatrix pb = b.empty() ? RealMatrix::Zero(rows, rows) : span_projector(columns(b), rows);
    return (pa - pb).norm();
}

inline double state_span_distance(const std::vector<ComplexVector> &a,
                                  const std::vector<ComplexVector> &b, Eigen::Index dim) {
    const RealMatrix pa = span_projector(state_columns(a, dim), 2 * dim);
    const RealMatrix pb = span_projector(state_columns(b, dim), 2 * dim);
    return (pa - pb).norm();
}

/// i * (Hermitian combination of Pauli words).
inline ComplexMatrix iherm(const std::vector<std::pair<double, std::string>> &terms) {
    ComplexMatrix m = ComplexMatrix::Zero(1 << terms.front().second.size(),
                                          1 << terms.front().second.size());
    for (const auto &[c, w] : terms) {
        m += c * word(w);
    }
    return complex_t(0, 1) * m;
}

/// Brute-force Lie closure: bracket every pair until the span stops growing.
inline Eigen::Index closure_dim(std::vector<ComplexMatrix> elems) {
    Eigen::Index dim = rank(columns(elems));
    for (;;) {
        std::vector<ComplexMatrix> next = elems;
        for (std::size_t a = 0; a < elems.size(); ++a) {
            for (std::size_t b = a + 1; b < elems.size(); ++b) {
                next.push_back(elems[a] * elems[b] - elems[b] * elems[a]);
            }
        }
        // Keep an independent subset to bound the growth.
        std::vector<ComplexMatrix> kept;
        for (const auto &m : next) {
            kept.push_back(m);
            if (rank(columns(kept)) < static_cast<Eigen::Index>(kept.size())) {
                kept.pop_back();
            }
        }
        const Eigen::Index new_dim = static_cast<Eigen::Index>(kept.size());
        elems = kept;
        if (new_dim == dim) {
            return dim;
        }
        dim = new_dim;
    }
}

/// Single-qubit Clifford group modulo phases (24 elements), an exact unitary 3-design.
inline std::vector<ComplexMatrix> clifford1() {
    const double r = 1.0 / std::sqrt(2.0);
    ComplexMatrix h(2, 2);
    h << r, r, r, -r;
    ComplexMatrix s(2, 2);
    s << 1, 0, 0, complex_t(0, 1);
    std::vector<ComplexMatrix> group = {ComplexMatrix::Identity(2, 2)};
    auto known = [&](const ComplexMatrix &g) {
        for (const auto &k : group) {
            const complex_t overlap = (k.adjoint() * g).trace() / 2.0;
            if (std::abs(std::abs(overlap) - 1.0) < 1e-9) {
                return true;
            }
        }
        return false;
    };
    for (std::size_t k = 0; k < group.size(); ++k) {
        for (const auto &gen : {h, s}) {
            const ComplexMatrix g = gen * group[k];
            if (!known(g)) {
                group.push_back(g);
            }
        }
    }
    return group;
}

/// Hand-rolled random instances.
class Gen {
  public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double angle() { return uniform(0.0, 2.0 * kPi); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    std::uint64_t seed() { return rng_(); }

    ComplexVector state(Eigen::Index dim) {
        ComplexVector v(dim);
        for (Eigen::Index k = 0; k < dim; ++k) {
            v(k) = complex_t(normal(), normal());
        }
        return v.normalized();
    }

    RealVector theta(int p) {
        RealVector t(p);
        for (int k = 0; k < p; ++k) {
            t(k) = angle();
        }
        return t;
    }

    std::string word(int n, bool allow_identity = false) {
        static const char letters[] = "IXYZ";
        for (;;) {
            std::string w;
            for (int q = 0; q < n; ++q) {
                w += letters[integer(0, 3)];
            }
            if (allow_identity || w.find_first_not_of('I') != std::string::npos) {
                return w;
            }
        }
    }

    /// Hermitian Pauli sum with 1 to max_terms random real-weighted words.
    symflow::PauliSum pauli_sum(int n, int max_terms) {
        std::vector<symflow::PauliTerm> terms;
        const int k = integer(1, max_terms);
        for (int t = 0; t < k; ++t) {
            terms.push_back({complex_t(uniform(-1.0, 1.0), 0.0), word(n)});
        }
        return symflow::PauliSum(static_cast<std::size_t>(n), std::move(terms));
    }

    ComplexMatrix skew(Eigen::Index dim) {
        ComplexMatrix a(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            for (Eigen::Index j = 0; j < dim; ++j) {
                a(i, j) = complex_t(normal(), normal());
            }
        }
        return 0.5 * (a - a.adjoint());
    }

    /// Random circuit of single- and two-qubit Pauli-sum gates, every parameter used once.
    symflow::CircuitSpec circuit(int n, int p, int n_fixed = 0) {
        std::vector<symflow::Gate> gates;
        std::vector<int> slots;
        for (int j = 0; j < p; ++j) {
            slots.push_back(j);
        }
        for (int f = 0; f < n_fixed; ++f) {
            slots.push_back(-1);
        }
        std::shuffle(slots.begin(), slots.end(), rng_);
        for (int slot : slots) {
            symflow::Gate g;
            const int width = n >= 2 ? integer(1, 2) : 1;
            const int q0 = integer(0, n - 1);
            g.wires.push_back(q0);
            if (width == 2) {
                int q1 = integer(0, n - 2);
                if (q1 >= q0) {
                    ++q1;
                }
                g.wires.push_back(q1);
            }
            g.generator = pauli_sum(width, 2);
            if (slot >= 0) {
                g.param_index = slot;
            } else {
                g.angle = angle();
            }
            if (integer(0, 3) == 0) {
                g.angle_scale = uniform(-1.5, 1.5);
            }
            gates.push_back(std::move(g));
        }
        return symflow::CircuitSpec(n, p, std::move(gates));
    }

  private:
    std::mt19937_64 rng_;
};

/// Dense U(theta) from products of Taylor exponentials of each full-register generator.
inline ComplexMatrix circuit_unitary(const symflow::CircuitSpec &c, const RealVector &theta) {
    const Eigen::Index d = c.dim();
    ComplexMatrix u = ComplexMatrix::Identity(d, d);
    for (const auto &g : c.gates()) {
        // Embed H by explicit Kronecker products with identities.
        ComplexMatrix h = ComplexMatrix::Zero(d, d);
        for (const auto &t : g.generator.terms()) {
            std::string full(static_cast<std::size_t>(c.n_qubits()), 'I');
            for (std::size_t k = 0; k < g.wires.size(); ++k) {
                full[static_cast<std::size_t>(g.wires[k])] = t.word[k];
            }
            h += t.coeff * word(full);
        }
        const double a = g.param_index ? theta(*g.param_index) : g.angle;
        u = expm(complex_t(0, g.angle_scale * a) * h) * u;
    }
    return u;
}

/// Central difference of a vector-valued function of theta along parameter j.
template <class F>
auto central_diff(F f, const RealVector &theta, int j, double h = 1e-5) {
    RealVector tp = theta;
    RealVector tm = theta;
    tp(j) += h;
    tm(j) -= h;
    return ((f(tp) - f(tm)) / (2.0 * h)).eval();
}

inline double re_overlap(const ComplexVector &a, const ComplexVector &b) { return a.dot(b).real(); }

/// Gram-Schmidt under Re<.|.> on real-vectorized states; returns an ONB.
inline std::vector<ComplexVector> onb(const std::vector<ComplexVector> &vs, double tol = 1e-9) {
    std::vector<ComplexVector> out;
    for (auto v : vs) {
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto &o : out) {
                v -= re_overlap(o, v) * o;
            }
        }
        if (v.norm() > tol) {
            out.push_back(v.normalized());
        }
    }
    return out;
}

inline ComplexVector project_onto(const std::vector<ComplexVector> &onb_list, const ComplexVector &v) {
    ComplexVector out = ComplexVector::Zero(v.size());
    for (const auto &o : onb_list) {
        out += re_overlap(o, v) * o;
    }
    return out;
}

inline symflow::Gate make_gate(const std::string &h, std::vector<int> wires, std::optional<int> param,
                               double scale = -1.0, double angle = 0.0) {
    symflow::Gate g;
    g.generator = symflow::parse_pauli_sum(h, wires.size());
    g.wires = std::move(wires);
    g.param_index = param;
    g.angle = angle;
    g.angle_scale = scale;
    return g;
}

/// e^{i t3} R_X(t2) R_Y(t1) on one qubit.
inline symflow::CircuitSpec gate_example_circuit() {
    return symflow::CircuitSpec(1, 3, {make_gate("0.5*Y", {0}, 0), make_gate("0.5*X", {0}, 1),
                                       make_gate("I", {0}, 2, 1.0)});
}

/// CR_X(t3) with control on wire 1, after R_Y(t1) on wire 0 and R_Y(t2) on wire 1.
inline symflow::CircuitSpec entangling_circuit() {
    return symflow::CircuitSpec(2, 3, {make_gate("0.5*Y", {0}, 0), make_gate("0.5*Y", {1}, 1),
                                       make_gate("0.25*XI - 0.25*XZ", {0, 1}, 2)});
}

inline ComplexMatrix ry(double t) {
    ComplexMatrix m(2, 2);
    m << std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2);
    return m;
}

inline ComplexMatrix rx(double t) {
    ComplexMatrix m(2, 2);
    m << std::cos(t / 2), complex_t(0, -std::sin(t / 2)), complex_t(0, -std::sin(t / 2)), std::cos(t / 2);
    return m;
}

} // namespace oracle
