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
#include "symflow/liealg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iostream>
#include <sstream>

#include "symflow/pauli.hpp"

namespace symflow {

namespace {

constexpr double kSignTol = 1e-10;
constexpr double kZeroNorm = 1e-12;

bool is_power_of_two(int d) { return d > 0 && (d & (d - 1)) == 0; }

Eigen::Index coord_dim(int d) { return static_cast<Eigen::Index>(d) * d; }

void require_ambient(int d, const AlgebraElement &x, const char *what) {
    if (x.rows() != d || x.cols() != d) {
        throw ShapeError(std::string(what) + ": expected a " + std::to_string(d) + "x" +
                         std::to_string(d) + " matrix, got " + std::to_string(x.rows()) + "x" +
                         std::to_string(x.cols()));
    }
}

std::vector<AlgebraElement> gell_mann_basis(int d) {
    std::vector<AlgebraElement> out;
    const double dd = d;
    out.push_back(ComplexMatrix::Identity(d, d) * kI);
    const double off = std::sqrt(dd / 2.0);
    for (int j = 0; j < d; ++j) {
        for (int k = j + 1; k < d; ++k) {
            ComplexMatrix s = ComplexMatrix::Zero(d, d);
            s(j, k) = kI * off;
            s(k, j) = kI * off;
            out.push_back(s);
            ComplexMatrix a = ComplexMatrix::Zero(d, d);
            a(j, k) = off;
            a(k, j) = -off;
            out.push_back(a);
        }
    }
    for (int l = 1; l < d; ++l) {
        ComplexMatrix h = ComplexMatrix::Zero(d, d);
        for (int m = 0; m < l; ++m) {
            h(m, m) = kI;
        }
        h(l, l) = -static_cast<double>(l) * kI;
        out.push_back(h / trace_norm(h));
    }
    return out;
}

/// Incremental Gram-Schmidt over coordinate vectors.
class Orthonormalizer {
  public:
    explicit Orthonormalizer(Eigen::Index dim) : q_(dim, 0) {}

    bool try_append(const RealVector &c, double rel_tol) {
        const double n0 = c.norm();
        if (n0 <= kZeroNorm) {
            return false;
        }
        RealVector r = c;
        for (int pass = 0; pass < 2; ++pass) {
            if (q_.cols() > 0) {
                r -= q_ * (q_.transpose() * r);
            }
        }
        const double nr = r.norm();
        if (nr <= rel_tol * n0 || nr <= kZeroNorm) {
            return false;
        }
        q_.conservativeResize(Eigen::NoChange, q_.cols() + 1);
        q_.col(q_.cols() - 1) = r / nr;
        return true;
    }

    [[nodiscard]] const RealMatrix &q() const { return q_; }

  private:
    RealMatrix q_;
};

} // namespace

std::vector<AlgebraElement> u_basis(int d) {
    if (d <= 0) {
        throw ShapeError("u_basis: dimension must be positive");
    }
    if (!is_power_of_two(d)) {
        return gell_mann_basis(d);
    }
    const auto n = static_cast<std::size_t>(std::countr_zero(static_cast<unsigned>(d)));
    const std::size_t n_words = std::size_t{1} << (2 * n);
    std::vector<AlgebraElement> out;
    out.reserve(n_words);
    for (std::size_t w = 0; w < n_words; ++w) {
        out.push_back(kI * pauli_word_matrix(pauli_word_from_index(w, n)));
    }
    return out;
}

RealVector u_coords(const AlgebraElement &x) {
    require_square(x, "u_coords");
    const int d = static_cast<int>(x.rows());
    if (is_power_of_two(d)) {
        // x = sum_P c_P P with c_P = i a_P, where a_P is the coordinate along iP.
        return pauli_coefficients(x).imag();
    }
    const auto basis = gell_mann_basis(d);
    RealVector c(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k) {
        c(static_cast<Eigen::Index>(k)) = trace_inner(basis[k], x);
    }
    return c;
}

AlgebraElement u_from_coords(const RealVector &c, int d) {
    if (c.size() != coord_dim(d)) {
        throw ShapeError("u_from_coords: expected " + std::to_string(coord_dim(d)) +
                         " coordinates, got " + std::to_string(c.size()));
    }
    if (is_power_of_two(d)) {
        const auto n = static_cast<std::size_t>(std::countr_zero(static_cast<unsigned>(d)));
        std::vector<PauliTerm> terms;
        for (Eigen::Index w = 0; w < c.size(); ++w) {
            if (c(w) != 0.0) {
                terms.push_back({complex_t(0.0, c(w)), pauli_word_from_index(static_cast<std::size_t>(w), n)});
            }
        }
        return to_matrix(PauliSum(n, std::move(terms)));
    }
    const auto basis = gell_mann_basis(d);
    ComplexMatrix out = ComplexMatrix::Zero(d, d);
    for (std::size_t k = 0; k < basis.size(); ++k) {
        out += c(static_cast<Eigen::Index>(k)) * basis[k];
    }
    return out;
}

Subspace::Subspace(int d) : d_(d), coords_(coord_dim(d), 0) {
    if (d < 0) {
        throw ShapeError("Subspace: negative dimension");
    }
}

void Subspace::append_canonical(const RealVector &unit) {
    RealVector v = unit;
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        if (std::abs(v(k)) > kSignTol) {
            if (v(k) < 0.0) {
                v = -v;
            }
            break;
        }
    }
    coords_.conservativeResize(Eigen::NoChange, coords_.cols() + 1);
    coords_.col(coords_.cols() - 1) = v;
    basis_.push_back(u_from_coords(v, d_));
}

Subspace Subspace::span(int d, const std::vector<AlgebraElement> &elements, double rel_tol) {
    Subspace out(d);
    Orthonormalizer gs(coord_dim(d));
    for (const auto &x : elements) {
        require_ambient(d, x, "Subspace::span");
        const double magnitude = std::max(1.0, x.cwiseAbs().maxCoeff());
        if (skew_defect(x) > kSkewTol * magnitude) {
            throw ContractViolation("Subspace::span: element is not skew-Hermitian");
        }
        if (gs.try_append(u_coords(x), rel_tol)) {
            out.append_canonical(gs.q().col(gs.q().cols() - 1));
        }
    }
    return out;
}

Subspace Subspace::from_coords(int d, const RealMatrix &columns, double rel_tol) {
    if (columns.rows() != coord_dim(d)) {
        throw ShapeError("Subspace::from_coords: coordinate length mismatch");
    }
    Subspace out(d);
    if (columns.cols() == 0) {
        return out;
    }
    const RealMatrix q = range_real(columns, rel_tol);
    const Eigen::Index k = q.cols();
    if (k == 0) {
        return out;
    }
    // Gauss-Jordan elimination on the rows of q^T gives a basis that depends
    // only on the span, then Gram-Schmidt in pivot order.
    RealMatrix a = q.transpose();
    Eigen::Index row = 0;
    for (Eigen::Index col = 0; col < a.cols() && row < k; ++col) {
        Eigen::Index best = row;
        a.col(col).segment(row, k - row).cwiseAbs().maxCoeff(&best);
        best += row;
        if (std::abs(a(best, col)) <= 1e-8) {
            continue;
        }
        a.row(row).swap(a.row(best));
        a.row(row) /= a(row, col);
        for (Eigen::Index r = 0; r < k; ++r) {
            if (r != row && a(r, col) != 0.0) {
                a.row(r) -= a(r, col) * a.row(row);
            }
        }
        ++row;
    }
    Orthonormalizer gs(coord_dim(d));
    for (Eigen::Index r = 0; r < k; ++r) {
        if (gs.try_append(a.row(r).transpose(), 1e-8)) {
            out.append_canonical(gs.q().col(gs.q().cols() - 1));
        }
    }
    return out;
}

Subspace Subspace::full(int d) {
    return from_coords(d, RealMatrix::Identity(coord_dim(d), coord_dim(d)));
}

AlgebraElement Subspace::project(const AlgebraElement &x) const {
    require_ambient(d_, x, "Subspace::project");
    return u_from_coords(project_coords(u_coords(x)), d_);
}

RealVector Subspace::project_coords(const RealVector &c) const {
    if (c.size() != coord_dim(d_)) {
        throw ShapeError("Subspace::project_coords: coordinate length mismatch");
    }
    if (coords_.cols() == 0) {
        return RealVector::Zero(c.size());
    }
    return coords_ * (coords_.transpose() * c);
}

bool Subspace::contains(const AlgebraElement &x, double tol) const {
    const RealVector c = u_coords(x);
    const double residual = (c - project_coords(c)).norm();
    return residual <= tol * std::max(1.0, c.norm());
}

RealMatrix Subspace::projector() const {
    if (coords_.cols() == 0) {
        return RealMatrix::Zero(coord_dim(d_), coord_dim(d_));
    }
    return coords_ * coords_.transpose();
}

namespace {

void require_same_ambient(const Subspace &a, const Subspace &b, const char *what) {
    if (a.dim_ambient() != b.dim_ambient()) {
        throw ShapeError(std::string(what) + ": subspaces live in u(" +
                         std::to_string(a.dim_ambient()) + ") and u(" +
                         std::to_string(b.dim_ambient()) + ")");
    }
}

} // namespace

double projector_distance(const Subspace &a, const Subspace &b) {
    require_same_ambient(a, b, "projector_distance");
    return (a.projector() - b.projector()).norm();
}

Subspace orthogonal_complement(const Subspace &sub) {
    const int d = sub.dim_ambient();
    if (sub.dim() == 0) {
        return Subspace::full(d);
    }
    return Subspace::from_coords(d, nullspace_real(sub.coords().transpose()));
}

Subspace relative_complement(const Subspace &outer, const Subspace &inner) {
    require_same_ambient(outer, inner, "relative_complement");
    const int d = outer.dim_ambient();
    if (outer.dim() == 0) {
        return Subspace(d);
    }
    RealMatrix m = outer.coords();
    if (inner.dim() > 0) {
        m -= inner.coords() * (inner.coords().transpose() * m);
    }
    // Directions of `outer` inside `inner` leave singular values near zero.
    const Eigen::BDCSVD<RealMatrix> svd(m, Eigen::ComputeThinU);
    const RealVector &s = svd.singularValues();
    Eigen::Index keep = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        keep += s(k) * s(k) > kIntersectTol ? 1 : 0;
    }
    return Subspace::from_coords(d, svd.matrixU().leftCols(keep));
}

Subspace subspace_sum(const Subspace &a, const Subspace &b) {
    require_same_ambient(a, b, "subspace_sum");
    RealMatrix m(a.coords().rows(), a.coords().cols() + b.coords().cols());
    m << a.coords(), b.coords();
    return Subspace::from_coords(a.dim_ambient(), m);
}

Subspace intersection(const Subspace &a, const Subspace &b) {
    require_same_ambient(a, b, "intersection");
    const int d = a.dim_ambient();
    if (a.dim() == 0 || b.dim() == 0) {
        return Subspace(d);
    }
    // Singular values of Qa^T Qb are cosines of principal angles.
    const RealMatrix overlap = a.coords().transpose() * b.coords();
    const Eigen::BDCSVD<RealMatrix> svd(overlap, Eigen::ComputeThinU);
    const RealVector &s = svd.singularValues();
    Eigen::Index keep = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        keep += s(k) * s(k) >= 1.0 - kIntersectTol ? 1 : 0;
    }
    return Subspace::from_coords(d, a.coords() * svd.matrixU().leftCols(keep));
}

Subspace lie_closure(const std::vector<AlgebraElement> &generators) {
    if (generators.empty()) {
        return Subspace();
    }
    const int d = static_cast<int>(generators.front().rows());
    const Eigen::Index dim_u = coord_dim(d);
    Subspace out(d);
    Orthonormalizer gs(dim_u);
    std::vector<AlgebraElement> mats;
    std::vector<std::size_t> frontier;

    auto consider = [&](const AlgebraElement &x) {
        if (gs.try_append(u_coords(x), rank_tol())) {
            out.append_canonical(gs.q().col(gs.q().cols() - 1));
            mats.push_back(out.basis().back());
            return true;
        }
        return false;
    };

    for (const auto &g : generators) {
        require_ambient(d, g, "lie_closure");
        const double magnitude = std::max(1.0, g.cwiseAbs().maxCoeff());
        if (skew_defect(g) > kSkewTol * magnitude) {
            throw ContractViolation("lie_closure: generator is not skew-Hermitian");
        }
        if (consider(g)) {
            frontier.push_back(mats.size() - 1);
        }
    }

    const long max_rounds = 10L * d * d;
    long rounds = 0;
    while (!frontier.empty()) {
        if (++rounds > max_rounds) {
            throw ConvergenceError("lie_closure: no fixed point after " +
                                   std::to_string(max_rounds) + " rounds");
        }
        std::vector<std::size_t> next;
        const std::size_t known = mats.size();
        for (std::size_t fi = 0; fi < frontier.size(); ++fi) {
            const std::size_t i = frontier[fi];
            for (std::size_t j = 0; j < known; ++j) {
                if (j == i) {
                    continue;
                }
                const bool j_in_frontier =
                    std::find(frontier.begin(), frontier.end(), j) != frontier.end();
                if (j_in_frontier && j < i) {
                    continue;
                }
                if (consider(commutator(mats[i], mats[j]))) {
                    next.push_back(mats.size() - 1);
                }
                if (static_cast<Eigen::Index>(mats.size()) == dim_u) {
                    return out;
                }
            }
        }
        frontier = std::move(next);
    }
    return out;
}

namespace {

/// Progressive joint kernel of linear maps restricted to the running kernel.
/// `apply(k, n)` returns the image of the coordinate columns n under map k.
/// Singular values are judged against at least a unit scale.
template <class Apply>
RealMatrix joint_kernel(Eigen::Index dim, std::size_t n_maps, Apply apply) {
    RealMatrix n = RealMatrix::Identity(dim, dim);
    for (std::size_t k = 0; k < n_maps && n.cols() > 0; ++k) {
        const RealMatrix image = apply(k, n);
        const RealMatrix w = nullspace_real_scaled(image, rank_tol(), 1.0);
        n = (n * w).eval();
    }
    return n;
}

} // namespace

Subspace commutant(const Subspace &sub, int d) {
    if (sub.dim() > 0 && sub.dim_ambient() != d) {
        throw ShapeError("commutant: subspace lives in u(" + std::to_string(sub.dim_ambient()) +
                         "), requested u(" + std::to_string(d) + ")");
    }
    if (sub.dim() == 0) {
        return Subspace::full(d);
    }
    const Eigen::Index dim_u = coord_dim(d);
    const RealMatrix kernel =
        joint_kernel(dim_u, sub.dim(), [&](std::size_t k, const RealMatrix &n) {
            const AlgebraElement &y = sub.basis()[k];
            RealMatrix image(dim_u, n.cols());
            for (Eigen::Index c = 0; c < n.cols(); ++c) {
                image.col(c) = u_coords(commutator(y, u_from_coords(n.col(c), d)));
            }
            return image;
        });
    return Subspace::from_coords(d, kernel);
}

Subspace center(const Subspace &sub) {
    const int d = sub.dim_ambient();
    if (sub.dim() == 0) {
        return Subspace(d);
    }
    if (!is_subalgebra(sub)) {
        std::clog << "symflow: warning: center() called on a subspace that is not closed under "
                     "the bracket\n";
    }
    const auto k = static_cast<Eigen::Index>(sub.dim());
    const Eigen::Index dim_u = coord_dim(d);
    // brackets[m].col(l) = coords([s_l, s_m])
    std::vector<RealMatrix> brackets(sub.dim(), RealMatrix(dim_u, k));
    for (Eigen::Index m = 0; m < k; ++m) {
        for (Eigen::Index l = 0; l < k; ++l) {
            if (l == m) {
                brackets[static_cast<std::size_t>(m)].col(l).setZero();
            } else if (l < m) {
                brackets[static_cast<std::size_t>(m)].col(l) =
                    -brackets[static_cast<std::size_t>(l)].col(m);
            } else {
                brackets[static_cast<std::size_t>(m)].col(l) = u_coords(
                    commutator(sub.basis()[static_cast<std::size_t>(l)], sub.basis()[static_cast<std::size_t>(m)]));
            }
        }
    }
    // brackets[l].col(m) for l < m was filled before being read above.
    const RealMatrix kernel = joint_kernel(k, sub.dim(), [&](std::size_t m, const RealMatrix &n) {
        return RealMatrix(brackets[m] * n);
    });
    return Subspace::from_coords(d, sub.coords() * kernel);
}

FourDecomposition four_decomposition(const Subspace &t, int d) {
    if (t.dim() > 0 && t.dim_ambient() != d) {
        throw ShapeError("four_decomposition: algebra lives in u(" +
                         std::to_string(t.dim_ambient()) + "), requested u(" + std::to_string(d) +
                         ")");
    }
    const Subspace tt = t.dim() > 0 ? t : Subspace(d);
    if (!is_subalgebra(tt)) {
        throw ContractViolation("four_decomposition: the symmetry algebra is not closed under the "
                                "commutator bracket");
    }
    FourDecomposition out;
    const Subspace ut = commutant(tt, d);
    out.center_t = center(tt);
    out.t_centerless = relative_complement(tt, out.center_t);
    out.ut_centerless = relative_complement(ut, out.center_t);
    out.r = orthogonal_complement(subspace_sum(ut, tt));
    return out;
}

AlgebraElement twirl_project(const AlgebraElement &x, const Subspace &commutant_basis) {
    require_ambient(commutant_basis.dim_ambient(), x, "twirl_project");
    ComplexMatrix out = ComplexMatrix::Zero(x.rows(), x.cols());
    for (const auto &y : commutant_basis.basis()) {
        out += trace_inner(y, x) * y;
    }
    return out;
}

bool is_subalgebra(const Subspace &sub, double tol) {
    const auto &b = sub.basis();
    for (std::size_t i = 0; i < b.size(); ++i) {
        for (std::size_t j = i + 1; j < b.size(); ++j) {
            const RealVector c = u_coords(commutator(b[i], b[j]));
            const double residual = (c - sub.project_coords(c)).norm();
            if (residual > tol * std::max(1.0, c.norm())) {
                return false;
            }
        }
    }
    return true;
}

std::string format_subspace(const Subspace &sub, const std::string &name, int precision) {
    std::ostringstream os;
    os << name << ": dim " << sub.dim() << "\n";
    const int d = sub.dim_ambient();
    for (std::size_t k = 0; k < sub.dim(); ++k) {
        os << "  [" << k << "] ";
        if (is_power_of_two(d)) {
            const double prune = std::pow(10.0, -precision);
            os << format_pauli_sum(pauli_decompose(sub.basis()[k], std::max(prune, kPruneTol)),
                                   precision);
        } else {
            const RealVector c = sub.coords().col(static_cast<Eigen::Index>(k));
            os << "coords(";
            for (Eigen::Index m = 0; m < c.size(); ++m) {
                os << (m ? ", " : "") << c(m);
            }
            os << ")";
        }
        os << "\n";
    }
    return os.str();
}

std::vector<AlgebraElement> algebra_from_pauli_strings(const std::vector<std::string> &texts,
                                                       std::size_t n_qubits) {
    std::vector<AlgebraElement> out;
    out.reserve(texts.size());
    for (const auto &text : texts) {
        const PauliSum h = parse_pauli_sum(text, n_qubits);
        if (!h.is_hermitian()) {
            throw SpecError("generator '" + text + "' is not Hermitian (complex coefficients)");
        }
        out.push_back(kI * to_matrix(h));
    }
    return out;
}

} // namespace symflow
