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
#include <string>
#include <vector>

#include "symflow/circuit.hpp"

namespace symflow {

/// Where the symmetry acts: on the output state (left) or on the input state (theta).
enum class Action { left, theta };

std::string to_string(Action a);
Action action_from_string(const std::string &s);

/**
 * @brief Represented symmetry algebra t together with its action on states.
 *
 * Construction checks bracket closure and precomputes the commutant u^t.
 */
class SymmetrySpec {
  public:
    SymmetrySpec(Subspace algebra, Action action);

    [[nodiscard]] const Subspace &algebra() const { return algebra_; }
    [[nodiscard]] const Subspace &commutant() const { return commutant_; }
    [[nodiscard]] Action action() const { return action_; }
    [[nodiscard]] int dim_ambient() const { return algebra_.dim_ambient(); }

  private:
    Subspace algebra_;
    Subspace commutant_;
    Action action_;
};

struct TangentFrame {
    std::vector<Statevector> raw;
    RealMatrix gram;
    std::vector<Statevector> onb;
    std::size_t rank = 0;
};

struct StateFourDecomposition {
    std::vector<Statevector> cov;
    std::vector<Statevector> both;
    std::vector<Statevector> equi;
    std::vector<Statevector> vert;
    /// Dimension of T_psi H = u(d)|psi>.
    std::size_t tangent_dim = 0;
    /// tangent_dim minus the four piece dimensions.
    long residual_dim = 0;
};

/// Re<x|y>.
double real_overlap(const Statevector &x, const Statevector &y);
RealMatrix real_gram(const std::vector<Statevector> &vectors);

/// Frame of tangents generated by an arbitrary algebra basis under an action.
TangentFrame algebra_frame(const Subspace &basis, Action action, const CircuitSpec &c,
                           const ParamPoint &theta, const Statevector &psi0);
TangentFrame vertical_frame(const SymmetrySpec &sym, const CircuitSpec &c,
                            const ParamPoint &theta, const Statevector &psi0);
TangentFrame equivariant_frame(const SymmetrySpec &sym, const CircuitSpec &c,
                               const ParamPoint &theta, const Statevector &psi0);

/// Orthonormal basis of u(d)|psi> as 2d x k real columns.
RealMatrix tangent_space_basis(const Statevector &psi);

StateFourDecomposition state_four_decomposition(const SymmetrySpec &sym, const CircuitSpec &c,
                                                const ParamPoint &theta,
                                                const Statevector &psi0);

struct AlgebraSplit {
    Subspace parallel;
    Subspace perpendicular;
};

/// u_par = {x | x acting at the action point gives a horizontal tangent}; u_perp its complement.
AlgebraSplit induced_algebra_split(const SymmetrySpec &sym, const CircuitSpec &c,
                                   const ParamPoint &theta, const Statevector &psi0);
/// Same construction for the right action of t on the unitary u (tangents u*x).
AlgebraSplit induced_algebra_split_unitary(const Subspace &t, const ComplexMatrix &u);

/// Minimum-norm skew-Hermitian x with x|psi> = v, when v lies in u(d)|psi>.
std::optional<AlgebraElement> tangent_generator(const Statevector &v, const Statevector &psi,
                                                double tol = 1e-8);
/// Amplitude list and generator description of each tangent.
std::string format_tangents(const std::vector<Statevector> &tangents, const Statevector &psi,
                            const std::string &name, int precision = 6);

} // namespace symflow
