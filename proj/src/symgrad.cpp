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
#include "symflow/symgrad.hpp"

#include <cmath>

namespace symflow {

namespace {

void check_sym(const SymmetrySpec &sym, const CircuitSpec &c) {
    if (sym.dim_ambient() != c.dim()) {
        throw ShapeError("symmetry algebra lives in u(" + std::to_string(sym.dim_ambient()) +
                         ") but the circuit acts on dimension " + std::to_string(c.dim()));
    }
}

/// Everything the cost-level formulas need at one parameter point.
struct Snapshot {
    Statevector psi;
    std::vector<Statevector> partials;
    TangentFrame frame;
    RealMatrix omega;
};

Snapshot snapshot(const SymmetrySpec &sym, const CircuitSpec &c, const ParamPoint &theta,
                  const Statevector &psi0, BasisKind kind) {
    check_sym(sym, c);
    Snapshot s;
    s.psi = apply(c, theta, psi0);
    s.partials = state_partials(c, theta, psi0);
    s.frame = algebra_frame(basis_of(sym, kind), sym.action(), c, theta, psi0);
    const auto nb = static_cast<Eigen::Index>(s.frame.raw.size());
    s.omega.resize(nb, c.n_params());
    for (Eigen::Index b = 0; b < nb; ++b) {
        for (Eigen::Index j = 0; j < c.n_params(); ++j) {
            s.omega(b, j) = real_overlap(s.frame.raw[static_cast<std::size_t>(b)],
                                         s.partials[static_cast<std::size_t>(j)]);
        }
    }
    return s;
}

Statevector combine(const std::vector<Statevector> &vs, const RealVector &coeff,
                    Eigen::Index dim) {
    Statevector out = Statevector::Zero(dim);
    for (std::size_t a = 0; a < vs.size(); ++a) {
        out += coeff(static_cast<Eigen::Index>(a)) * vs[a];
    }
    return out;
}

RealVector m_vector(const Statevector &m_psi, const std::vector<Statevector> &tangents) {
    RealVector m(static_cast<Eigen::Index>(tangents.size()));
    for (std::size_t a = 0; a < tangents.size(); ++a) {
        m(static_cast<Eigen::Index>(a)) = 2.0 * real_overlap(m_psi, tangents[a]);
    }
    return m;
}

RealVector partial_vector(const Statevector &m_psi, const std::vector<Statevector> &partials) {
    return m_vector(m_psi, partials);
}

} // namespace

const Subspace &basis_of(const SymmetrySpec &sym, BasisKind kind) {
    return kind == BasisKind::vertical ? sym.algebra() : sym.commutant();
}

ComplexMatrix equivariant_derivative_unitary(const CircuitSpec &c, const ParamPoint &theta, int j,
                                             const SymmetrySpec &sym) {
    check_sym(sym, c);
    const AlgebraElement omega = effective_generator(c, theta, j, Side::right);
    return build_unitary(c, theta) * twirl_project(omega, sym.commutant());
}

ComplexMatrix covariant_derivative_unitary(const CircuitSpec &c, const ParamPoint &theta, int j,
                                           const SymmetrySpec &sym) {
    check_sym(sym, c);
    AlgebraElement omega = effective_generator(c, theta, j, Side::right);
    const AlgebraElement vertical = twirl_project(omega, sym.algebra());
    omega -= vertical;
    return build_unitary(c, theta) * omega;
}

Statevector equivariant_derivative_state(const SymmetrySpec &sym, const CircuitSpec &c,
                                         const ParamPoint &theta, int j,
                                         const Statevector &psi0) {
    const Snapshot s = snapshot(sym, c, theta, psi0, BasisKind::equivariant);
    if (j < 0 || j >= c.n_params()) {
        throw ShapeError("parameter index out of range");
    }
    const RealVector coeff = pinv_psd(s.frame.gram) * s.omega.col(j);
    return combine(s.frame.raw, coeff, c.dim());
}

Statevector covariant_derivative_state(const SymmetrySpec &sym, const CircuitSpec &c,
                                       const ParamPoint &theta, int j, const Statevector &psi0) {
    const Snapshot s = snapshot(sym, c, theta, psi0, BasisKind::vertical);
    if (j < 0 || j >= c.n_params()) {
        throw ShapeError("parameter index out of range");
    }
    const RealVector coeff = pinv_psd(s.frame.gram) * s.omega.col(j);
    return s.partials[static_cast<std::size_t>(j)] - combine(s.frame.raw, coeff, c.dim());
}

RealVector symmetry_derivative(const SymmetrySpec &sym, const CircuitSpec &c,
                               const ParamPoint &theta, const Statevector &psi0,
                               const PauliSum &m, BasisKind kind) {
    check_sym(sym, c);
    check_observable(c, m);
    const TangentFrame f = algebra_frame(basis_of(sym, kind), sym.action(), c, theta, psi0);
    return m_vector(apply_pauli_sum(m, apply(c, theta, psi0)), f.raw);
}

RealVector symmetry_derivative_commutator(const SymmetrySpec &sym, const CircuitSpec &c,
                                          const ParamPoint &theta, const Statevector &psi0,
                                          const PauliSum &m, BasisKind kind) {
    check_sym(sym, c);
    check_observable(c, m);
    ComplexMatrix mm = to_matrix(m);
    Statevector phi = apply(c, theta, psi0);
    if (sym.action() == Action::theta) {
        const ComplexMatrix u = build_unitary(c, theta);
        mm = u.adjoint() * mm * u;
        phi = psi0;
    }
    const auto &basis = basis_of(sym, kind).basis();
    RealVector out(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t a = 0; a < basis.size(); ++a) {
        out(static_cast<Eigen::Index>(a)) = phi.dot(commutator(mm, basis[a]) * phi).real();
    }
    return out;
}

RealMatrix overlap_omega(const SymmetrySpec &sym, const CircuitSpec &c, const ParamPoint &theta,
                         const Statevector &psi0, BasisKind kind) {
    return snapshot(sym, c, theta, psi0, kind).omega;
}

RealMatrix overlap_omega_anticommutator(const SymmetrySpec &sym, const CircuitSpec &c,
                                        const ParamPoint &theta, const Statevector &psi0,
                                        BasisKind kind) {
    check_sym(sym, c);
    const bool theta_action = sym.action() == Action::theta;
    const Statevector phi = theta_action ? psi0 : apply(c, theta, psi0);
    const Side side = theta_action ? Side::right : Side::left;
    const auto &basis = basis_of(sym, kind).basis();
    RealMatrix out(static_cast<Eigen::Index>(basis.size()), c.n_params());
    for (int j = 0; j < c.n_params(); ++j) {
        const AlgebraElement omega = effective_generator(c, theta, j, side);
        for (std::size_t b = 0; b < basis.size(); ++b) {
            out(static_cast<Eigen::Index>(b), j) =
                -0.5 * phi.dot(anticommutator(basis[b], omega) * phi).real();
        }
    }
    return out;
}

bool has_commuting_generators(const CircuitSpec &c) {
    std::vector<AlgebraElement> gens;
    for (std::size_t g = 0; g < c.gates().size(); ++g) {
        gens.push_back(gate_generator(c, g));
    }
    for (std::size_t a = 0; a < gens.size(); ++a) {
        for (std::size_t b = a + 1; b < gens.size(); ++b) {
            const double scale =
                std::max(1.0, gens[a].cwiseAbs().maxCoeff() * gens[b].cwiseAbs().maxCoeff());
            if (commutator(gens[a], gens[b]).cwiseAbs().maxCoeff() > kSkewTol * scale) {
                return false;
            }
        }
    }
    return true;
}

RealMatrix overlap_omega_commuting(const SymmetrySpec &sym, const CircuitSpec &c,
                                   const ParamPoint &theta, const Statevector &psi0,
                                   BasisKind kind) {
    check_sym(sym, c);
    check_theta(c, theta);
    check_state(c, psi0);
    if (!has_commuting_generators(c)) {
        throw ContractViolation("overlap_omega_commuting: gate generators do not commute");
    }
    const Statevector phi = sym.action() == Action::theta ? psi0 : apply(c, theta, psi0);
    const auto &basis = basis_of(sym, kind).basis();
    RealMatrix out = RealMatrix::Zero(static_cast<Eigen::Index>(basis.size()), c.n_params());
    for (int j = 0; j < c.n_params(); ++j) {
        const auto g = c.gate_of_param(j);
        if (!g) {
            continue;
        }
        const AlgebraElement gen = gate_generator(c, *g);
        for (std::size_t b = 0; b < basis.size(); ++b) {
            out(static_cast<Eigen::Index>(b), j) =
                -0.5 * phi.dot(anticommutator(basis[b], gen) * phi).real();
        }
    }
    return out;
}

SymGradReport covariant_derivative_cost(const SymmetrySpec &sym, const CircuitSpec &c,
                                        const ParamPoint &theta, const Statevector &psi0,
                                        const PauliSum &m) {
    check_observable(c, m);
    const Snapshot s = snapshot(sym, c, theta, psi0, BasisKind::vertical);
    const Statevector m_psi = apply_pauli_sum(m, s.psi);
    SymGradReport r;
    r.cost = s.psi.dot(m_psi).real();
    r.m = m_vector(m_psi, s.frame.raw);
    r.omega = s.omega;
    r.gram = s.frame.gram;
    r.vector_potential = pinv_psd(r.gram) * r.omega;
    r.partial = partial_vector(m_psi, s.partials);
    r.projected = r.partial - r.vector_potential.transpose() * r.m;
    return r;
}

SymGradReport equivariant_derivative_cost(const SymmetrySpec &sym, const CircuitSpec &c,
                                          const ParamPoint &theta, const Statevector &psi0,
                                          const PauliSum &m) {
    check_observable(c, m);
    const Snapshot s = snapshot(sym, c, theta, psi0, BasisKind::equivariant);
    const Statevector m_psi = apply_pauli_sum(m, s.psi);
    SymGradReport r;
    r.cost = s.psi.dot(m_psi).real();
    r.m = m_vector(m_psi, s.frame.raw);
    r.omega = s.omega;
    r.gram = s.frame.gram;
    r.vector_potential = pinv_psd(r.gram) * r.omega;
    r.partial = partial_vector(m_psi, s.partials);
    r.projected = r.vector_potential.transpose() * r.m;
    return r;
}

SymGradReport partial_derivative_cost(const CircuitSpec &c, const ParamPoint &theta,
                                      const Statevector &psi0, const PauliSum &m) {
    check_observable(c, m);
    const Statevector psi = apply(c, theta, psi0);
    const Statevector m_psi = apply_pauli_sum(m, psi);
    SymGradReport r;
    r.cost = psi.dot(m_psi).real();
    r.m = RealVector(0);
    r.omega = RealMatrix(0, c.n_params());
    r.gram = RealMatrix(0, 0);
    r.vector_potential = RealMatrix(0, c.n_params());
    r.partial = partial_vector(m_psi, state_partials(c, theta, psi0));
    r.projected = r.partial;
    return r;
}

RealMatrix vector_potential(const SymmetrySpec &sym, const CircuitSpec &c,
                            const ParamPoint &theta, const Statevector &psi0) {
    const Snapshot s = snapshot(sym, c, theta, psi0, BasisKind::vertical);
    return pinv_psd(s.frame.gram) * s.omega;
}

} // namespace symflow
