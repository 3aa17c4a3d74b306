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
#include "symflow/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace symflow {

namespace {

constexpr int kMaxStateQubits = 24;

std::size_t gate_for(const CircuitSpec &c, int j) {
    if (c.shared_params()) {
        throw ContractViolation("derivatives require single-use parameters");
    }
    if (j < 0 || j >= c.n_params()) {
        throw ShapeError("parameter index " + std::to_string(j) + " out of range [0, " +
                         std::to_string(c.n_params()) + ")");
    }
    const auto g = c.gate_of_param(j);
    return g ? *g : c.gates().size();
}

} // namespace

CircuitSpec::CircuitSpec(int n_qubits, int n_params, std::vector<Gate> gates,
                         bool allow_shared_params)
    : n_qubits_(n_qubits), n_params_(n_params), gates_(std::move(gates)) {
    if (n_qubits < 1 || n_qubits > kMaxStateQubits) {
        throw SpecError("n_qubits must lie in [1, " + std::to_string(kMaxStateQubits) + "], got " +
                        std::to_string(n_qubits));
    }
    if (n_params < 0) {
        throw SpecError("n_params must be non-negative");
    }
    param_gate_.assign(static_cast<std::size_t>(n_params), std::nullopt);
    for (std::size_t g = 0; g < gates_.size(); ++g) {
        const Gate &gate = gates_[g];
        const std::string where = "gate " + std::to_string(g) + ": ";
        if (gate.wires.empty()) {
            throw SpecError(where + "no wires");
        }
        std::set<int> seen;
        for (int w : gate.wires) {
            if (w < 0 || w >= n_qubits) {
                throw SpecError(where + "wire " + std::to_string(w) + " out of range");
            }
            if (!seen.insert(w).second) {
                throw SpecError(where + "repeated wire " + std::to_string(w));
            }
        }
        if (gate.generator.n_qubits() != gate.wires.size()) {
            throw SpecError(where + "generator acts on " +
                            std::to_string(gate.generator.n_qubits()) + " qubits but " +
                            std::to_string(gate.wires.size()) + " wires were given");
        }
        if (!gate.generator.is_hermitian()) {
            throw ContractViolation(where + "generator is not Hermitian");
        }
        if (!std::isfinite(gate.angle_scale) || !std::isfinite(gate.angle)) {
            throw SpecError(where + "non-finite angle or scale");
        }
        if (gate.param_index) {
            const int p = *gate.param_index;
            if (p < 0 || p >= n_params) {
                throw SpecError(where + "parameter index " + std::to_string(p) + " out of range");
            }
            auto &slot = param_gate_[static_cast<std::size_t>(p)];
            if (slot) {
                if (!allow_shared_params) {
                    throw SpecError(where + "parameter " + std::to_string(p) +
                                    " is already used by gate " + std::to_string(*slot));
                }
                shared_params_ = true;
            } else {
                slot = g;
            }
        }
    }
}

std::optional<std::size_t> CircuitSpec::gate_of_param(int j) const {
    if (j < 0 || j >= n_params_) {
        return std::nullopt;
    }
    return param_gate_[static_cast<std::size_t>(j)];
}

void check_theta(const CircuitSpec &c, const ParamPoint &theta) {
    if (theta.size() != c.n_params()) {
        throw ShapeError("theta has length " + std::to_string(theta.size()) + ", circuit has " +
                         std::to_string(c.n_params()) + " parameters");
    }
    if (!theta.allFinite()) {
        throw ContractViolation("theta has non-finite entries");
    }
}

void check_state(const CircuitSpec &c, const Statevector &psi) {
    if (psi.size() != c.dim()) {
        throw ShapeError("state has length " + std::to_string(psi.size()) + ", expected " +
                         std::to_string(c.dim()));
    }
}

void check_observable(const CircuitSpec &c, const PauliSum &m) {
    if (static_cast<int>(m.n_qubits()) != c.n_qubits()) {
        throw ShapeError("observable acts on " + std::to_string(m.n_qubits()) +
                         " qubits, circuit has " + std::to_string(c.n_qubits()));
    }
    if (!m.is_hermitian()) {
        throw ContractViolation("observable is not Hermitian");
    }
}

double gate_angle(const Gate &g, const ParamPoint &theta) {
    return g.param_index ? theta(*g.param_index) : g.angle;
}

ComplexMatrix local_generator(const Gate &g) {
    return complex_t(0.0, g.angle_scale) * to_matrix(g.generator);
}

ComplexMatrix gate_unitary_local(const Gate &g, double angle) {
    return expm_skew(local_generator(g), angle);
}

namespace {

struct LocalLayout {
    std::vector<std::uint64_t> offsets;
    std::uint64_t mask = 0;
};

LocalLayout layout_for(const std::vector<int> &wires, int n_qubits) {
    LocalLayout out;
    const std::size_t k = wires.size();
    std::vector<std::uint64_t> bits(k);
    for (std::size_t w = 0; w < k; ++w) {
        bits[w] = std::uint64_t{1} << (n_qubits - 1 - wires[w]);
        out.mask |= bits[w];
    }
    out.offsets.assign(std::size_t{1} << k, 0);
    for (std::size_t l = 0; l < out.offsets.size(); ++l) {
        std::uint64_t off = 0;
        for (std::size_t w = 0; w < k; ++w) {
            if ((l >> (k - 1 - w)) & 1U) {
                off |= bits[w];
            }
        }
        out.offsets[l] = off;
    }
    return out;
}

template <class Column>
void apply_with_layout(Column &&psi, const ComplexMatrix &local, const LocalLayout &lay,
                       std::uint64_t d) {
    const auto m = static_cast<Eigen::Index>(lay.offsets.size());
    ComplexVector buf(m);
    for (std::uint64_t base = 0; base < d; ++base) {
        if (base & lay.mask) {
            continue;
        }
        for (Eigen::Index l = 0; l < m; ++l) {
            buf(l) = psi(static_cast<Eigen::Index>(base | lay.offsets[static_cast<std::size_t>(l)]));
        }
        const ComplexVector out = local * buf;
        for (Eigen::Index l = 0; l < m; ++l) {
            psi(static_cast<Eigen::Index>(base | lay.offsets[static_cast<std::size_t>(l)])) = out(l);
        }
    }
}

} // namespace

void apply_local(ComplexVector &psi, const ComplexMatrix &local, const std::vector<int> &wires,
                 int n_qubits) {
    const std::uint64_t d = std::uint64_t{1} << n_qubits;
    if (static_cast<std::uint64_t>(psi.size()) != d) {
        throw ShapeError("apply_local: state length mismatch");
    }
    if (local.rows() != (Eigen::Index{1} << wires.size()) || local.cols() != local.rows()) {
        throw ShapeError("apply_local: local matrix does not match the wire count");
    }
    apply_with_layout(psi, local, layout_for(wires, n_qubits), d);
}

void apply_local_columns(ComplexMatrix &m, const ComplexMatrix &local,
                         const std::vector<int> &wires, int n_qubits) {
    const std::uint64_t d = std::uint64_t{1} << n_qubits;
    if (static_cast<std::uint64_t>(m.rows()) != d) {
        throw ShapeError("apply_local_columns: row count mismatch");
    }
    if (local.rows() != (Eigen::Index{1} << wires.size()) || local.cols() != local.rows()) {
        throw ShapeError("apply_local_columns: local matrix does not match the wire count");
    }
    const LocalLayout lay = layout_for(wires, n_qubits);
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        apply_with_layout(m.col(c), local, lay, d);
    }
}

AlgebraElement gate_generator(const CircuitSpec &c, std::size_t gate) {
    const Gate &g = c.gates().at(gate);
    ComplexMatrix out = ComplexMatrix::Identity(c.dim(), c.dim());
    apply_local_columns(out, local_generator(g), g.wires, c.n_qubits());
    return out;
}

void apply_range(const CircuitSpec &c, const ParamPoint &theta, Statevector &psi,
                 std::size_t begin, std::size_t end) {
    for (std::size_t g = begin; g < end; ++g) {
        const Gate &gate = c.gates()[g];
        apply_local(psi, gate_unitary_local(gate, gate_angle(gate, theta)), gate.wires,
                    c.n_qubits());
    }
}

ComplexMatrix range_unitary(const CircuitSpec &c, const ParamPoint &theta, std::size_t begin,
                            std::size_t end) {
    if (c.n_qubits() > kMaxDenseQubits) {
        throw ShapeError("dense unitaries are limited to " + std::to_string(kMaxDenseQubits) +
                         " qubits");
    }
    ComplexMatrix u = ComplexMatrix::Identity(c.dim(), c.dim());
    for (std::size_t g = begin; g < end; ++g) {
        const Gate &gate = c.gates()[g];
        apply_local_columns(u, gate_unitary_local(gate, gate_angle(gate, theta)), gate.wires,
                            c.n_qubits());
    }
    return u;
}

ComplexMatrix build_unitary(const CircuitSpec &c, const ParamPoint &theta) {
    check_theta(c, theta);
    return range_unitary(c, theta, 0, c.gates().size());
}

Statevector apply(const CircuitSpec &c, const ParamPoint &theta, const Statevector &psi0) {
    check_theta(c, theta);
    check_state(c, psi0);
    Statevector psi = psi0;
    apply_range(c, theta, psi, 0, c.gates().size());
    return psi;
}

AlgebraElement effective_generator(const CircuitSpec &c, const ParamPoint &theta, int j,
                                   Side side) {
    check_theta(c, theta);
    const std::size_t g = gate_for(c, j);
    if (g == c.gates().size()) {
        return ComplexMatrix::Zero(c.dim(), c.dim());
    }
    const AlgebraElement gen = gate_generator(c, g);
    if (side == Side::right) {
        const ComplexMatrix b = range_unitary(c, theta, 0, g);
        return b.adjoint() * gen * b;
    }
    const ComplexMatrix a = range_unitary(c, theta, g + 1, c.gates().size());
    return a * gen * a.adjoint();
}

Statevector state_partial(const CircuitSpec &c, const ParamPoint &theta, int j,
                          const Statevector &psi0) {
    check_theta(c, theta);
    check_state(c, psi0);
    const std::size_t g = gate_for(c, j);
    if (g == c.gates().size()) {
        return Statevector::Zero(c.dim());
    }
    Statevector phi = psi0;
    apply_range(c, theta, phi, 0, g);
    apply_local(phi, local_generator(c.gates()[g]), c.gates()[g].wires, c.n_qubits());
    apply_range(c, theta, phi, g, c.gates().size());
    return phi;
}

std::vector<Statevector> state_partials(const CircuitSpec &c, const ParamPoint &theta,
                                        const Statevector &psi0) {
    std::vector<Statevector> out;
    out.reserve(static_cast<std::size_t>(c.n_params()));
    for (int j = 0; j < c.n_params(); ++j) {
        out.push_back(state_partial(c, theta, j, psi0));
    }
    return out;
}

double cost(const CircuitSpec &c, const ParamPoint &theta, const Statevector &psi0,
            const PauliSum &m) {
    check_observable(c, m);
    return expectation(m, apply(c, theta, psi0)).real();
}

double cost_partial(const CircuitSpec &c, const ParamPoint &theta, int j,
                    const Statevector &psi0, const PauliSum &m) {
    check_observable(c, m);
    const Statevector psi = apply(c, theta, psi0);
    const Statevector dpsi = state_partial(c, theta, j, psi0);
    return 2.0 * psi.dot(apply_pauli_sum(m, dpsi)).real();
}

double cost_partial_commutator(const CircuitSpec &c, const ParamPoint &theta, int j,
                               const Statevector &psi0, const PauliSum &m) {
    check_observable(c, m);
    check_state(c, psi0);
    const ComplexMatrix u = build_unitary(c, theta);
    const ComplexMatrix mt = u.adjoint() * to_matrix(m) * u;
    const AlgebraElement omega = effective_generator(c, theta, j, Side::right);
    return psi0.dot(commutator(mt, omega) * psi0).real();
}

Subspace dla(const CircuitSpec &c) {
    std::vector<AlgebraElement> gens;
    gens.reserve(c.gates().size());
    for (std::size_t g = 0; g < c.gates().size(); ++g) {
        gens.push_back(gate_generator(c, g));
    }
    if (gens.empty()) {
        return Subspace(static_cast<int>(c.dim()));
    }
    return lie_closure(gens);
}

Statevector basis_state(const std::string &label) {
    if (label.empty() || label.size() > static_cast<std::size_t>(kMaxStateQubits)) {
        throw SpecError("basis-state label must have 1 to " + std::to_string(kMaxStateQubits) +
                        " characters");
    }
    const double r = 1.0 / std::sqrt(2.0);
    Statevector psi = Statevector::Ones(1);
    for (char ch : label) {
        Eigen::Vector2cd q;
        switch (ch) {
        case '0':
            q << 1.0, 0.0;
            break;
        case '1':
            q << 0.0, 1.0;
            break;
        case '+':
            q << r, r;
            break;
        case '-':
            q << r, -r;
            break;
        default:
            throw SpecError("invalid basis-state character '" + std::string(1, ch) + "'");
        }
        Statevector next(psi.size() * 2);
        for (Eigen::Index k = 0; k < psi.size(); ++k) {
            next(2 * k) = psi(k) * q(0);
            next(2 * k + 1) = psi(k) * q(1);
        }
        psi = next;
    }
    return psi;
}

} // namespace symflow
