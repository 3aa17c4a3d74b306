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
#pragma once
#include "symflow/tangent.hpp"

namespace symflow {

/// Selects t (vertical directions) or its commutant u^t (equivariant directions).
enum class BasisKind { vertical, equivariant };

struct SymGradReport {
    double cost = 0.0;
    /// m_a: change of the cost along each basis direction.
    RealVector m;
    /// omega(b, j) = <<Z_b|d_j psi>>.
    RealMatrix omega;
    RealMatrix gram;
    /// vector_potential(a, j) = (G^+ omega)(a, j).
    RealMatrix vector_potential;
    RealVector partial;
    /// D_j C for the covariant report, E_j C for the equivariant one.
    RealVector projected;
};

const Subspace &basis_of(const SymmetrySpec &sym, BasisKind kind);

// Unitary level: the symmetry acts on U from the right.
ComplexMatrix equivariant_derivative_unitary(const CircuitSpec &c, const ParamPoint &theta, int j,
                                             const SymmetrySpec &sym);
ComplexMatrix covariant_derivative_unitary(const CircuitSpec &c, const ParamPoint &theta, int j,
                                           const SymmetrySpec &sym);

Statevector equivariant_derivative_state(const SymmetrySpec &sym, const CircuitSpec &c,
                                         const ParamPoint &theta, int j, const Statevector &psi0);
Statevector covariant_derivative_state(const SymmetrySpec &sym, const CircuitSpec &c,
                                       const ParamPoint &theta, int j, const Statevector &psi0);

/// m_a = 2 Re<psi|M|Z_a> with Z_a the tangent of basis element a at the action point.
RealVector symmetry_derivative(const SymmetrySpec &sym, const CircuitSpec &c,
                               const ParamPoint &theta, const Statevector &psi0,
                               const PauliSum &m, BasisKind kind);
/// Commutator form: <psi|[M, z_a]|psi> (left) or <psi0|[U^dag M U, z_a]|psi0> (theta).
RealVector symmetry_derivative_commutator(const SymmetrySpec &sym, const CircuitSpec &c,
                                          const ParamPoint &theta, const Statevector &psi0,
                                          const PauliSum &m, BasisKind kind);

/// omega(b, j) = <<Z_b|d_j psi>> from statevectors.
RealMatrix overlap_omega(const SymmetrySpec &sym, const CircuitSpec &c, const ParamPoint &theta,
                         const Statevector &psi0, BasisKind kind);
/// omega(b, j) = -1/2 <phi|{z_b, Omega_j}|phi>, phi = psi0 with Omega^R (theta) or psi with Omega^L (left).
RealMatrix overlap_omega_anticommutator(const SymmetrySpec &sym, const CircuitSpec &c,
                                        const ParamPoint &theta, const Statevector &psi0,
                                        BasisKind kind);

/// True when all gate generators pairwise commute.
bool has_commuting_generators(const CircuitSpec &c);
/// Omega_j equals the bare gate generator when all generators commute.
RealMatrix overlap_omega_commuting(const SymmetrySpec &sym, const CircuitSpec &c,
                                   const ParamPoint &theta, const Statevector &psi0,
                                   BasisKind kind);

SymGradReport covariant_derivative_cost(const SymmetrySpec &sym, const CircuitSpec &c,
                                        const ParamPoint &theta, const Statevector &psi0,
                                        const PauliSum &m);
SymGradReport equivariant_derivative_cost(const SymmetrySpec &sym, const CircuitSpec &c,
                                          const ParamPoint &theta, const Statevector &psi0,
                                          const PauliSum &m);

/// Plain partial-derivative report (m, omega, gram and A left empty).
SymGradReport partial_derivative_cost(const CircuitSpec &c, const ParamPoint &theta,
                                      const Statevector &psi0, const PauliSum &m);

/// A = G^+ omega for the vertical frame.
RealMatrix vector_potential(const SymmetrySpec &sym, const CircuitSpec &c,
                            const ParamPoint &theta, const Statevector &psi0);

} // namespace symflow
