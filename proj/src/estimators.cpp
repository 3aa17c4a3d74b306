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
#include "symflow/estimators.hpp"

#include <cmath>
#include <numbers>

namespace symflow {

namespace {

constexpr double kImagTol = 1e-10;

Gate shifted(const Gate &g) {
    Gate out = g;
    for (int &w : out.wires) {
        w += 1;
    }
    return out;
}

Gate inverted(const Gate &g) {
    Gate out = shifted(g);
    out.angle_scale = -out.angle_scale;
    return out;
}

/// exp(i (pi Pi + pi/4 (I - Z_anc))) with Pi = |1><1| (x) (I - w)/2: controlled-(i w).
Gate controlled_iw(const std::string &word) {
    const std::size_t n = word.size() + 1;
    const std::string id(word.size(), 'I');
    const double pi = std::numbers::pi;
    std::vector<PauliTerm> terms = {
        {complex_t(pi / 4.0 + pi / 4.0), "I" + id},
        {complex_t(-pi / 4.0 - pi / 4.0), "Z" + id},
        {complex_t(-pi / 4.0), "I" + word},
        {complex_t(pi / 4.0), "Z" + word},
    };
    Gate g;
    g.generator = PauliSum(n, std::move(terms));
    for (std::size_t q = 0; q < n; ++q) {
        g.wires.push_back(static_cast<int>(q));
    }
    g.angle = 1.0;
    g.angle_scale = 1.0;
    return g;
}

/// Real Hermitian Pauli sum h with z = i h.
PauliSum hermitian_part_of_skew(const AlgebraElement &z, std::size_t n) {
    const PauliSum h = pauli_decompose(complex_t(0.0, -1.0) * z);
    std::vector<PauliTerm> terms;
    for (const auto &t : h.terms()) {
        terms.push_back({complex_t(t.coeff.real(), 0.0), t.word});
    }
    return PauliSum(n, std::move(terms));
}

PauliSum y_times(const PauliSum &h) {
    std::vector<PauliTerm> terms;
    for (const auto &t : h.terms()) {
        terms.push_back({t.coeff, "Y" + t.word});
    }
    return PauliSum(h.n_qubits() + 1, std::move(terms));
}

} // namespace

Statevector ancilla_initial_state(const Statevector &psi0) {
    const double r = 1.0 / std::sqrt(2.0);
    Statevector out(2 * psi0.size());
    out.head(psi0.size()) = r * psi0;
    out.tail(psi0.size()) = r * psi0;
    return out;
}

std::vector<AncillaCircuit> build_ancilla_circuit(const CircuitSpec &c, int j,
                                                  const AlgebraElement &z_b, Action action,
                                                  bool role_exchange) {
    if (j < 0 || j >= c.n_params()) {
        throw ShapeError("parameter index " + std::to_string(j) + " out of range");
    }
    if (z_b.rows() != c.dim() || z_b.cols() != c.dim()) {
        throw ShapeError("z_b has the wrong dimension for the circuit");
    }
    if (!is_skew_hermitian(z_b, kSkewTol * std::max(1.0, z_b.cwiseAbs().maxCoeff()))) {
        throw ContractViolation("z_b is not skew-Hermitian");
    }
    const auto gate_index = c.gate_of_param(j);
    if (!gate_index) {
        return {};
    }
    const auto n = static_cast<std::size_t>(c.n_qubits());
    const auto &gates = c.gates();
    const std::size_t k = *gate_index;
    const Gate &gj = gates[k];

    // Prefix and suffix on the system for the four (action, role) cases.
    std::vector<Gate> prefix;
    std::vector<Gate> suffix;
    if (action == Action::theta) {
        for (std::size_t g = 0; g < k; ++g) {
            (role_exchange ? prefix : suffix).push_back(shifted(gates[g]));
        }
        if (role_exchange) {
            for (std::size_t g = k; g-- > 0;) {
                suffix.push_back(inverted(gates[g]));
            }
        }
    } else {
        const std::size_t prefix_end = role_exchange ? k + 1 : gates.size();
        for (std::size_t g = 0; g < prefix_end; ++g) {
            prefix.push_back(shifted(gates[g]));
        }
        if (role_exchange) {
            for (std::size_t g = k + 1; g < gates.size(); ++g) {
                suffix.push_back(shifted(gates[g]));
            }
        } else {
            for (std::size_t g = gates.size(); g-- > k + 1;) {
                suffix.push_back(inverted(gates[g]));
            }
        }
    }

    UnitaryDecomposition decomposition;
    PauliSum measured;
    double measured_scale = 1.0;
    if (role_exchange) {
        decomposition = unitary_decomposition(gate_generator(c, k));
        measured = hermitian_part_of_skew(z_b, n);
    } else {
        decomposition = unitary_decomposition(z_b);
        measured = embed_pauli_sum(gj.generator, gj.wires, n);
        measured_scale = gj.angle_scale;
    }
    const PauliSum observable = y_times(measured);

    std::vector<AncillaCircuit> out;
    for (const auto &term : decomposition.terms) {
        if (std::abs(term.chi.real()) > kImagTol * std::max(1.0, std::abs(term.chi))) {
            throw ContractViolation("unitary decomposition has a coefficient with a real part");
        }
        std::vector<Gate> all = prefix;
        all.push_back(controlled_iw(term.w.terms().front().word));
        all.insert(all.end(), suffix.begin(), suffix.end());
        AncillaCircuit ac{CircuitSpec(c.n_qubits() + 1, c.n_params(), std::move(all), true),
                          observable, term.chi, term.w, measured_scale * term.chi.imag()};
        out.push_back(std::move(ac));
    }
    return out;
}

double hadamard_omega(const CircuitSpec &c, const ParamPoint &theta, int j,
                      const AlgebraElement &z_b, const Statevector &psi0, Action action,
                      bool role_exchange) {
    check_theta(c, theta);
    check_state(c, psi0);
    const Statevector start = ancilla_initial_state(psi0);
    double total = 0.0;
    for (const auto &ac : build_ancilla_circuit(c, j, z_b, action, role_exchange)) {
        const Statevector phi = apply(ac.base, theta, start);
        const complex_t e = expectation(ac.observable, phi);
        if (std::abs(e.imag()) > kImagTol) {
            throw ContractViolation("ancilla expectation has an imaginary residual");
        }
        total += ac.weight * e.real();
    }
    return total;
}

double insertion_m(const CircuitSpec &c, const ParamPoint &theta, const Statevector &psi0,
                   const PauliSum &m, const AlgebraElement &z_a, Action action, double h) {
    check_theta(c, theta);
    check_state(c, psi0);
    check_observable(c, m);
    if (!(h > 0.0)) {
        throw ContractViolation("insertion_m needs h > 0");
    }
    if (z_a.rows() != c.dim() || z_a.cols() != c.dim()) {
        throw ShapeError("z_a has the wrong dimension for the circuit");
    }
    const Statevector psi = action == Action::left ? apply(c, theta, psi0) : psi0;
    auto value = [&](double t) {
        Statevector v = expm_skew(z_a, t) * psi;
        if (action == Action::theta) {
            v = apply(c, theta, v);
        }
        return expectation(m, v).real();
    };
    return (value(h) - value(-h)) / (2.0 * h);
}

} // namespace symflow
