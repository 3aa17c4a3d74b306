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
#include "symflow/tangent.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "symflow/pauli.hpp"

namespace symflow {

std::string to_string(Action a) { return a == Action::left ? "left" : "theta"; }

Action action_from_string(const std::string &s) {
    if (s == "left") {
        return Action::left;
    }
    if (s == "theta") {
        return Action::theta;
    }
    throw SpecError("unknown symmetry action '" + s + "' (expected 'left' or 'theta')");
}

SymmetrySpec::SymmetrySpec(Subspace algebra, Action action)
    : algebra_(std::move(algebra)), action_(action) {
    if (algebra_.dim_ambient() < 1) {
        throw ShapeError("SymmetrySpec: the algebra needs a positive ambient dimension");
    }
    if (!is_subalgebra(algebra_)) {
        throw ContractViolation("symmetry generators do not span a Lie algebra: some commutator "
                                "leaves their span");
    }
    commutant_ = symflow::commutant(algebra_, algebra_.dim_ambient());
}

double real_overlap(const Statevector &x, const Statevector &y) {
    if (x.size() != y.size()) {
        throw ShapeError("real_overlap: lengths " + std::to_string(x.size()) + " and " +
                         std::to_string(y.size()));
    }
    return x.dot(y).real();
}

RealMatrix real_gram(const std::vector<Statevector> &vectors) {
    const auto n = static_cast<Eigen::Index>(vectors.size());
    RealMatrix g(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = a; b < n; ++b) {
            g(a, b) = real_overlap(vectors[static_cast<std::size_t>(a)], vectors[static_cast<std::size_t>(b)]);
            g(b, a) = g(a, b);
        }
    }
    return g;
}

namespace {

bool power_of_two(Eigen::Index d) { return d > 0 && (d & (d - 1)) == 0; }

/// Columns realify(b_k psi) over the u(d) basis.
RealMatrix algebra_image(const Statevector &psi) {
    const Eigen::Index d = psi.size();
    const Eigen::Index dim_u = d * d;
    RealMatrix out(2 * d, dim_u);
    if (power_of_two(d)) {
        const auto n = static_cast<std::size_t>(std::countr_zero(static_cast<std::uint64_t>(d)));
        for (Eigen::Index k = 0; k < dim_u; ++k) {
            const PauliSum ip(n, {{kI, pauli_word_from_index(static_cast<std::size_t>(k), n)}});
            out.col(k) = realify(apply_pauli_sum(ip, psi));
        }
        return out;
    }
    const auto basis = u_basis(static_cast<int>(d));
    for (Eigen::Index k = 0; k < dim_u; ++k) {
        out.col(k) = realify(basis[static_cast<std::size_t>(k)] * psi);
    }
    return out;
}

RealMatrix columns_of(const std::vector<Statevector> &vs, Eigen::Index d) {
    RealMatrix out(2 * d, static_cast<Eigen::Index>(vs.size()));
    for (std::size_t k = 0; k < vs.size(); ++k) {
        out.col(static_cast<Eigen::Index>(k)) = realify(vs[k]);
    }
    return out;
}

std::vector<Statevector> vectors_of(const RealMatrix &cols) {
    std::vector<Statevector> out;
    out.reserve(static_cast<std::size_t>(cols.cols()));
    for (Eigen::Index k = 0; k < cols.cols(); ++k) {
        out.push_back(complexify(cols.col(k)));
    }
    return out;
}

/// Orthonormal basis of range(PA) intersected with range(PB).
RealMatrix intersect_projectors(const RealMatrix &pa, const RealMatrix &pb) {
    const RealMatrix m = pa * pb * pa;
    const Eigen::SelfAdjointEigenSolver<RealMatrix> es(0.5 * (m + m.transpose()));
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = es.eigenvalues().size() - 1; k >= 0; --k) {
        if (es.eigenvalues()(k) >= 1.0 - kIntersectTol) {
            keep.push_back(k);
        }
    }
    RealMatrix out(pa.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t a = 0; a < keep.size(); ++a) {
        out.col(static_cast<Eigen::Index>(a)) = es.eigenvectors().col(keep[a]);
    }
    return out;
}

RealMatrix projector_of(const RealMatrix &q) { return q * q.transpose(); }

void check_frame_inputs(const Subspace &basis, const CircuitSpec &c, const Statevector &psi0) {
    check_state(c, psi0);
    if (basis.dim() > 0 && basis.dim_ambient() != c.dim()) {
        throw ShapeError("symmetry algebra lives in u(" + std::to_string(basis.dim_ambient()) +
                         ") but the circuit state has dimension " + std::to_string(c.dim()));
    }
}

} // namespace

TangentFrame algebra_frame(const Subspace &basis, Action action, const CircuitSpec &c,
                           const ParamPoint &theta, const Statevector &psi0) {
    check_frame_inputs(basis, c, psi0);
    check_theta(c, theta);
    // The Gram matrix is evaluated at the point where the symmetry acts.
    const Statevector point = action == Action::theta ? psi0 : apply(c, theta, psi0);
    std::vector<Statevector> at_point;
    at_point.reserve(basis.dim());
    for (const auto &x : basis.basis()) {
        at_point.push_back(x * point);
    }
    TangentFrame f;
    f.gram = real_gram(at_point);
    if (action == Action::theta) {
        for (const auto &v : at_point) {
            f.raw.push_back(apply(c, theta, v));
        }
    } else {
        f.raw = at_point;
    }
    f.onb = sym_orthonormalize(f.raw, f.gram);
    f.rank = f.onb.size();
    return f;
}

TangentFrame vertical_frame(const SymmetrySpec &sym, const CircuitSpec &c,
                            const ParamPoint &theta, const Statevector &psi0) {
    return algebra_frame(sym.algebra(), sym.action(), c, theta, psi0);
}

TangentFrame equivariant_frame(const SymmetrySpec &sym, const CircuitSpec &c,
                               const ParamPoint &theta, const Statevector &psi0) {
    return algebra_frame(sym.commutant(), sym.action(), c, theta, psi0);
}

RealMatrix tangent_space_basis(const Statevector &psi) { return range_real(algebra_image(psi)); }

StateFourDecomposition state_four_decomposition(const SymmetrySpec &sym, const CircuitSpec &c,
                                                const ParamPoint &theta,
                                                const Statevector &psi0) {
    const Statevector psi = apply(c, theta, psi0);
    const Eigen::Index d = psi.size();
    const RealMatrix qt = tangent_space_basis(psi);
    const RealMatrix pt = projector_of(qt);
    const RealMatrix pv = projector_of(columns_of(vertical_frame(sym, c, theta, psi0).onb, d));
    const RealMatrix pe = projector_of(columns_of(equivariant_frame(sym, c, theta, psi0).onb, d));
    const RealMatrix ph = pt - pv;

    const RealMatrix equi = intersect_projectors(pe, pv);
    const RealMatrix both = intersect_projectors(pe, ph);
    const RealMatrix cov = intersect_projectors(ph, pt - pe);
    const RealMatrix vert = intersect_projectors(pv, pt - projector_of(equi));

    StateFourDecomposition out;
    out.cov = vectors_of(cov);
    out.both = vectors_of(both);
    out.equi = vectors_of(equi);
    out.vert = vectors_of(vert);
    out.tangent_dim = static_cast<std::size_t>(qt.cols());
    out.residual_dim = static_cast<long>(qt.cols()) -
                       static_cast<long>(cov.cols() + both.cols() + equi.cols() + vert.cols());
    return out;
}

AlgebraSplit induced_algebra_split(const SymmetrySpec &sym, const CircuitSpec &c,
                                   const ParamPoint &theta, const Statevector &psi0) {
    check_frame_inputs(sym.algebra(), c, psi0);
    check_theta(c, theta);
    const int d = static_cast<int>(c.dim());
    // For the theta action every tangent is U(theta) applied to a tangent at
    // psi0, and U(theta) preserves the real overlap, so work at psi0.
    const Statevector point = sym.action() == Action::theta ? psi0 : apply(c, theta, psi0);
    std::vector<Statevector> vertical;
    for (const auto &x : sym.algebra().basis()) {
        vertical.push_back(x * point);
    }
    const auto onb = sym_orthonormalize(vertical, real_gram(vertical));
    AlgebraSplit out;
    if (onb.empty()) {
        out.parallel = Subspace::full(d);
        out.perpendicular = Subspace(d);
        return out;
    }
    const RealMatrix qv = columns_of(onb, c.dim());
    const RealMatrix map = qv.transpose() * algebra_image(point);
    out.parallel = Subspace::from_coords(d, nullspace_real(map));
    out.perpendicular = orthogonal_complement(out.parallel);
    return out;
}

AlgebraSplit induced_algebra_split_unitary(const Subspace &t, const ComplexMatrix &u) {
    require_square(u, "induced_algebra_split_unitary");
    const int d = static_cast<int>(u.rows());
    if (t.dim() > 0 && t.dim_ambient() != d) {
        throw ShapeError("induced_algebra_split_unitary: dimension mismatch");
    }
    AlgebraSplit out;
    if (t.dim() == 0) {
        out.parallel = Subspace::full(d);
        out.perpendicular = Subspace(d);
        return out;
    }
    const auto basis = u_basis(d);
    // Tangents u*x_a are orthonormal under trace_inner because u is unitary.
    RealMatrix map(static_cast<Eigen::Index>(t.dim()), static_cast<Eigen::Index>(basis.size()));
    for (std::size_t a = 0; a < t.dim(); ++a) {
        const ComplexMatrix va = u * t.basis()[a];
        for (std::size_t k = 0; k < basis.size(); ++k) {
            map(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(k)) =
                trace_inner(va, u * basis[k]);
        }
    }
    out.parallel = Subspace::from_coords(d, nullspace_real(map));
    out.perpendicular = orthogonal_complement(out.parallel);
    return out;
}

std::optional<AlgebraElement> tangent_generator(const Statevector &v, const Statevector &psi,
                                                double tol) {
    if (v.size() != psi.size()) {
        throw ShapeError("tangent_generator: length mismatch");
    }
    const RealMatrix a = algebra_image(psi);
    const RealVector rhs = realify(v);
    const Eigen::BDCSVD<RealMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector coeff = svd.solve(rhs);
    if ((a * coeff - rhs).norm() > tol * std::max(1.0, rhs.norm())) {
        return std::nullopt;
    }
    return u_from_coords(coeff, static_cast<int>(psi.size()));
}

std::string format_tangents(const std::vector<Statevector> &tangents, const Statevector &psi,
                            const std::string &name, int precision) {
    std::ostringstream os;
    os << name << ": dim " << tangents.size() << "\n";
    const double prune = std::max(std::pow(10.0, -precision), kPruneTol);
    for (std::size_t k = 0; k < tangents.size(); ++k) {
        os << "  [" << k << "] amplitudes (";
        const Statevector &v = tangents[k];
        for (Eigen::Index m = 0; m < v.size(); ++m) {
            const double re = std::abs(v(m).real()) < prune ? 0.0 : v(m).real();
            const double im = std::abs(v(m).imag()) < prune ? 0.0 : v(m).imag();
            char buf[96];
            std::snprintf(buf, sizeof(buf), "%s%.*g%+.*gi", m ? ", " : "", precision, re,
                          precision, im);
            os << buf;
        }
        os << ")";
        if (power_of_two(psi.size())) {
            if (const auto x = tangent_generator(v, psi)) {
                os << " generator " << format_pauli_sum(pauli_decompose(*x, prune), precision);
            }
        }
        os << "\n";
    }
    return os.str();
}

} // namespace symflow
