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
#include <vector>

#include "symflow/tangent.hpp"

namespace symflow {

/**
 * @brief One term of the ancilla-based overlap estimator.
 *
 * `base` acts on N+1 qubits with the ancilla on wire 0, prepared in |+>
 * (see ancilla_initial_state). It consists of a prefix on the system, the
 * gate controlled-(i w) and a suffix on the system. Measuring `observable`
 * (Y on the ancilla times a Hermitian system operator) gives Re<w^dag O>,
 * and omega is the sum of weight * <observable> over all terms.
 */
struct AncillaCircuit {
    CircuitSpec base;
    PauliSum observable;
    /// Coefficient of w in the unitary decomposition.
    complex_t chi;
    /// Pauli word w on the system qubits.
    PauliSum word;
    /// Real contraction weight: angle scale of the measured generator times Im(chi).
    double weight = 0.0;
};

/// |+> on the ancilla tensored with psi0.
Statevector ancilla_initial_state(const Statevector &psi0);

/// One circuit per unitary term of z_b (of the gate generator with role_exchange).
/// Unused parameters give an empty list.
std::vector<AncillaCircuit> build_ancilla_circuit(const CircuitSpec &c, int j,
                                                  const AlgebraElement &z_b, Action action,
                                                  bool role_exchange = false);

/// omega(b, j) from exact simulation of the ancilla circuits.
double hadamard_omega(const CircuitSpec &c, const ParamPoint &theta, int j,
                      const AlgebraElement &z_b, const Statevector &psi0, Action action,
                      bool role_exchange = false);

/// Central difference of <M> with exp(t z_a) inserted at the action point.
double insertion_m(const CircuitSpec &c, const ParamPoint &theta, const Statevector &psi0,
                   const PauliSum &m, const AlgebraElement &z_a, Action action,
                   double h = 1e-5);

} // namespace symflow
