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
#include <optional>
#include <vector>

#include "symflow/liealg.hpp"
#include "symflow/pauli.hpp"

namespace symflow {

/// Parameter vector theta.
using ParamPoint = RealVector;
/// Complex amplitudes of length 2^n.
using Statevector = ComplexVector;

/**
 * @brief Gate exp(i * angle_scale * angle * H).
 *
 * The Hermitian generator H acts on `wires` (word position k on wires[k]).
 * With the default angle_scale of -1 the gate is exp(-i angle H).
 */
struct Gate {
    PauliSum generator;
    std::vector<int> wires;
    std::optional<int> param_index;
    double angle = 0.0;
    double angle_scale = -1.0;
};

enum class Side { right, left };

class CircuitSpec {
  public:
    CircuitSpec() = default;
    /// Validates wires, generators and parameter references. Parameters may
    /// be shared between gates only when `allow_shared_params` is set; such
    /// circuits can be simulated but not differentiated.
    CircuitSpec(int n_qubits, int n_params, std::vector<Gate> gates,
                bool allow_shared_params = false);

    [[nodiscard]] int n_qubits() const { return n_qubits_; }
    [[nodiscard]] int n_params() const { return n_params_; }
    [[nodiscard]] Eigen::Index dim() const { return Eigen::Index{1} << n_qubits_; }
    [[nodiscard]] const std::vector<Gate> &gates() const { return gates_; }
    [[nodiscard]] bool shared_params() const { return shared_params_; }
    /// Index of the gate driven by parameter j, if any.
    [[nodiscard]] std::optional<std::size_t> gate_of_param(int j) const;

  private:
    int n_qubits_ = 0;
    int n_params_ = 0;
    std::vector<Gate> gates_;
    bool shared_params_ = false;
    std::vector<std::optional<std::size_t>> param_gate_;
};

inline constexpr int kMaxDenseQubits = 10;

/// Angle of a gate at theta.
double gate_angle(const Gate &g, const ParamPoint &theta);
/// i * angle_scale * H on the gate's own wires.
ComplexMatrix local_generator(const Gate &g);
/// The gate's skew-Hermitian generator on the full register.
AlgebraElement gate_generator(const CircuitSpec &c, std::size_t gate);
ComplexMatrix gate_unitary_local(const Gate &g, double angle);

/// Applies a 2^k x 2^k matrix on `wires` (wires[0] most significant) in place.
void apply_local(ComplexVector &psi, const ComplexMatrix &local, const std::vector<int> &wires,
                 int n_qubits);
/// Applies the local matrix to every column of m.
void apply_local_columns(ComplexMatrix &m, const ComplexMatrix &local,
                         const std::vector<int> &wires, int n_qubits);

ComplexMatrix build_unitary(const CircuitSpec &c, const ParamPoint &theta);
Statevector apply(const CircuitSpec &c, const ParamPoint &theta, const Statevector &psi0);
/// Applies gates [begin, end) to psi in place.
void apply_range(const CircuitSpec &c, const ParamPoint &theta, Statevector &psi,
                 std::size_t begin, std::size_t end);
/// Product of gates [begin, end) as a dense matrix.
ComplexMatrix range_unitary(const CircuitSpec &c, const ParamPoint &theta, std::size_t begin,
                            std::size_t end);

/// Omega^R_j = U^dagger d_j U or Omega^L_j = (d_j U) U^dagger; zero for unused parameters.
AlgebraElement effective_generator(const CircuitSpec &c, const ParamPoint &theta, int j,
                                   Side side);
Statevector state_partial(const CircuitSpec &c, const ParamPoint &theta, int j,
                          const Statevector &psi0);
std::vector<Statevector> state_partials(const CircuitSpec &c, const ParamPoint &theta,
                                        const Statevector &psi0);

double cost(const CircuitSpec &c, const ParamPoint &theta, const Statevector &psi0,
            const PauliSum &m);
double cost_partial(const CircuitSpec &c, const ParamPoint &theta, int j,
                    const Statevector &psi0, const PauliSum &m);
/// <psi0|[M~, Omega^R_j]|psi0> with M~ = U^dagger M U.
double cost_partial_commutator(const CircuitSpec &c, const ParamPoint &theta, int j,
                               const Statevector &psi0, const PauliSum &m);

/// Lie closure of all gate generators.
Subspace dla(const CircuitSpec &c);

/// Checks length and finiteness of theta for the circuit.
void check_theta(const CircuitSpec &c, const ParamPoint &theta);
void check_state(const CircuitSpec &c, const Statevector &psi);
void check_observable(const CircuitSpec &c, const PauliSum &m);

/// Product state from per-qubit labels 0, 1, + and -.
Statevector basis_state(const std::string &label);

} // namespace symflow
