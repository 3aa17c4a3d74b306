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
#include "symflow/natgrad.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>

namespace symflow {

CostSpec::CostSpec(PauliSum observable) : CostSpec(std::vector<PauliSum>{std::move(observable)}, false) {}

CostSpec::CostSpec(std::vector<PauliSum> observables, bool squares)
    : observables_(std::move(observables)), squares_(squares) {
    if (observables_.empty()) {
        throw SpecError("cost needs at least one observable");
    }
    for (const auto &m : observables_) {
        if (m.n_qubits() != observables_.front().n_qubits()) {
            throw ShapeError("cost observables act on different qubit counts");
        }
        if (!m.is_hermitian()) {
            throw ContractViolation("cost observable is not Hermitian");
        }
    }
}

CostSpec CostSpec::sum_of_squares(std::vector<PauliSum> observables) {
    return CostSpec(std::move(observables), true);
}

double CostSpec::value(const Statevector &psi) const {
    double total = 0.0;
    for (const auto &m : observables_) {
        const double e = expectation(m, psi).real();
        total += squares_ ? e * e : e;
    }
    return total;
}

PauliSum CostSpec::effective_observable(const Statevector &psi) const {
    if (!squares_) {
        return observables_.front();
    }
    PauliSum out(n_qubits());
    for (const auto &m : observables_) {
        out += m.scaled(2.0 * expectation(m, psi).real());
    }
    return out;
}

namespace {

void check_cost(const CircuitSpec &c, const CostSpec &cost) {
    if (static_cast<int>(cost.n_qubits()) != c.n_qubits()) {
        throw ShapeError("cost acts on " + std::to_string(cost.n_qubits()) +
                         " qubits, circuit has " + std::to_string(c.n_qubits()));
    }
}

RealMatrix overlap_matrix(const std::vector<Statevector> &vs) { return real_gram(vs); }

RealVector gradient_from(const Statevector &m_psi, const std::vector<Statevector> &tangents) {
    RealVector g(static_cast<Eigen::Index>(tangents.size()));
    for (std::size_t j = 0; j < tangents.size(); ++j) {
        g(static_cast<Eigen::Index>(j)) = 2.0 * real_overlap(m_psi, tangents[j]);
    }
    return g;
}

/// Orthonormal frame of the global-phase direction i psi.
std::vector<Statevector> phase_frame(const Statevector &psi) {
    const std::vector<Statevector> v{complex_t(0.0, 1.0) * psi};
    return sym_orthonormalize(v, real_gram(v));
}

/// Gram matrix of the partials with their components along `onb` removed.
RealMatrix horizontal_gram(const std::vector<Statevector> &partials,
                           const std::vector<Statevector> &onb) {
    RealMatrix proj(static_cast<Eigen::Index>(onb.size()),
                    static_cast<Eigen::Index>(partials.size()));
    for (std::size_t a = 0; a < onb.size(); ++a) {
        for (std::size_t j = 0; j < partials.size(); ++j) {
            proj(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(j)) =
                real_overlap(onb[a], partials[j]);
        }
    }
    RealMatrix g = overlap_matrix(partials) - proj.transpose() * proj;
    return 0.5 * (g + g.transpose());
}

/// Covariant state derivatives for all j.
std::vector<Statevector> covariant_partials(const std::vector<Statevector> &onb,
                                            const std::vector<Statevector> &partials) {
    std::vector<Statevector> out = partials;
    for (auto &v : out) {
        for (const auto &t : onb) {
            v -= real_overlap(t, v) * t;
        }
    }
    return out;
}

} // namespace

MetricMatrix fubini_study(const CircuitSpec &c, const ParamPoint &theta, const Statevector &psi0) {
    const Statevector psi = apply(c, theta, psi0);
    MetricMatrix out;
    out.kind = MetricKind::fubini_study;
    out.entries = horizontal_gram(state_partials(c, theta, psi0), phase_frame(psi));
    return out;
}

MetricMatrix covariant_metric(const SymmetrySpec &sym, const CircuitSpec &c,
                              const ParamPoint &theta, const Statevector &psi0) {
    const TangentFrame f = vertical_frame(sym, c, theta, psi0);
    MetricMatrix out;
    out.kind = MetricKind::covariant;
    out.entries = horizontal_gram(state_partials(c, theta, psi0), f.onb);
    return out;
}

double cost_value(const CircuitSpec &c, const ParamPoint &theta, const Statevector &psi0,
                  const CostSpec &cost) {
    check_cost(c, cost);
    return cost.value(apply(c, theta, psi0));
}

RealVector cost_gradient(const CircuitSpec &c, const ParamPoint &theta, const Statevector &psi0,
                         const CostSpec &cost) {
    check_cost(c, cost);
    const Statevector psi = apply(c, theta, psi0);
    const PauliSum m = cost.effective_observable(psi);
    return gradient_from(apply_pauli_sum(m, psi), state_partials(c, theta, psi0));
}

RealVector covariant_gradient(const SymmetrySpec &sym, const CircuitSpec &c,
                              const ParamPoint &theta, const Statevector &psi0,
                              const CostSpec &cost) {
    check_cost(c, cost);
    const Statevector psi = apply(c, theta, psi0);
    const PauliSum m = cost.effective_observable(psi);
    return covariant_derivative_cost(sym, c, theta, psi0, m).projected;
}

ParamPoint gd_step(const CircuitSpec &c, const ParamPoint &theta, const Statevector &psi0,
                   const CostSpec &cost, double lr) {
    return theta - lr * cost_gradient(c, theta, psi0, cost);
}

ParamPoint qng_step(const CircuitSpec &c, const ParamPoint &theta, const Statevector &psi0,
                    const CostSpec &cost, double lr) {
    const RealMatrix f = fubini_study(c, theta, psi0).entries;
    return theta - lr * 0.5 * (pinv_psd(f) * cost_gradient(c, theta, psi0, cost));
}

ParamPoint cqng_step(const SymmetrySpec &sym, const CircuitSpec &c, const ParamPoint &theta,
                     const Statevector &psi0, const CostSpec &cost, double lr) {
    const RealMatrix fs = covariant_metric(sym, c, theta, psi0).entries;
    return theta - lr * 0.5 * (pinv_psd(fs) * covariant_gradient(sym, c, theta, psi0, cost));
}

std::string to_string(Method m) {
    switch (m) {
    case Method::gd:
        return "gd";
    case Method::qng:
        return "qng";
    default:
        return "cqng";
    }
}

Method method_from_string(const std::string &s) {
    if (s == "gd") {
        return Method::gd;
    }
    if (s == "qng") {
        return Method::qng;
    }
    if (s == "cqng") {
        return Method::cqng;
    }
    throw SpecError("unknown optimizer method '" + s + "' (expected gd, qng or cqng)");
}

OptTrace optimize(Method method, const SymmetrySpec *sym, const CircuitSpec &c,
                  const ParamPoint &theta0, const Statevector &psi0, const CostSpec &cost,
                  const OptimizeOptions &options) {
    if (method == Method::cqng && sym == nullptr) {
        throw ContractViolation("method cqng requires a symmetry");
    }
    if (!(options.lr > 0.0) || options.max_iter < 0 || !(options.tol >= 0.0)) {
        throw ContractViolation("optimizer needs lr > 0, max_iter >= 0 and tol >= 0");
    }
    check_theta(c, theta0);
    check_state(c, psi0);
    check_cost(c, cost);
    for (const auto &mon : options.monitors) {
        check_observable(c, mon.observable);
        if (mon.after_gates && *mon.after_gates > c.gates().size()) {
            throw ShapeError("monitor '" + mon.label + "' refers to more gates than the circuit has");
        }
    }
    const bool record_a = options.record_vector_potential && sym != nullptr;

    OptTrace trace;
    trace.method = method;
    trace.n_params = c.n_params();
    for (const auto &mon : options.monitors) {
        trace.extra_labels.push_back(mon.label);
    }
    if (record_a) {
        for (std::size_t a = 0; a < sym->algebra().dim(); ++a) {
            for (int j = 0; j < c.n_params(); ++j) {
                trace.extra_labels.push_back("A_" + std::to_string(a) + "_" + std::to_string(j));
            }
        }
    }

    ParamPoint theta = theta0;
    for (int it = 0;; ++it) {
        const Statevector psi = apply(c, theta, psi0);
        const auto partials = state_partials(c, theta, psi0);
        const PauliSum m_eff = cost.effective_observable(psi);
        const Statevector m_psi = apply_pauli_sum(m_eff, psi);

        RealVector grad;
        RealMatrix metric;
        if (method == Method::cqng) {
            const auto onb = vertical_frame(*sym, c, theta, psi0).onb;
            grad = gradient_from(m_psi, covariant_partials(onb, partials));
            metric = horizontal_gram(partials, onb);
        } else {
            grad = gradient_from(m_psi, partials);
            if (method == Method::qng) {
                metric = horizontal_gram(partials, phase_frame(psi));
            }
        }

        OptRecord rec;
        rec.iteration = it;
        rec.theta = theta;
        rec.cost = cost.value(psi);
        rec.grad_norm = grad.norm();
        for (const auto &mon : options.monitors) {
            Statevector phi = psi0;
            apply_range(c, theta, phi, 0, mon.after_gates.value_or(c.gates().size()));
            rec.extras.push_back(expectation(mon.observable, phi).real());
        }
        if (record_a) {
            const RealMatrix a = vector_potential(*sym, c, theta, psi0);
            for (Eigen::Index r = 0; r < a.rows(); ++r) {
                for (Eigen::Index j = 0; j < a.cols(); ++j) {
                    rec.extras.push_back(a(r, j));
                }
            }
        }
        const double gnorm = rec.grad_norm;
        trace.records.push_back(std::move(rec));
        if (gnorm < options.tol) {
            trace.converged = true;
            break;
        }
        if (it >= options.max_iter) {
            break;
        }
        if (method == Method::gd) {
            theta -= options.lr * grad;
        } else {
            theta -= options.lr * 0.5 * (pinv_psd(metric) * grad);
        }
    }
    return trace;
}

void write_trace_csv(std::ostream &os, const OptTrace &trace) {
    os << "iter";
    for (int j = 0; j < trace.n_params; ++j) {
        os << ",theta_" << j;
    }
    os << ",cost,grad_norm";
    for (const auto &label : trace.extra_labels) {
        os << "," << label;
    }
    os << "\n";
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return buf;
    };
    for (const auto &r : trace.records) {
        os << r.iteration;
        for (Eigen::Index j = 0; j < r.theta.size(); ++j) {
            os << "," << num(r.theta(j));
        }
        os << "," << num(r.cost) << "," << num(r.grad_norm);
        for (double e : r.extras) {
            os << "," << num(e);
        }
        os << "\n";
    }
}

ParamPoint random_theta(int n_params, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 2.0 * std::numbers::pi);
    ParamPoint theta(n_params);
    for (int j = 0; j < n_params; ++j) {
        theta(j) = dist(rng);
    }
    return theta;
}

Statevector random_product_state(int n_qubits, std::uint64_t seed) {
    if (n_qubits < 1) {
        throw ShapeError("random_product_state: need at least one qubit");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Statevector psi = Statevector::Ones(1);
    for (int q = 0; q < n_qubits; ++q) {
        Eigen::Vector2cd v;
        do {
            const double a = normal(rng);
            const double b = normal(rng);
            const double c = normal(rng);
            const double d = normal(rng);
            v << complex_t(a, b), complex_t(c, d);
        } while (v.norm() < 1e-12);
        v.normalize();
        Statevector next(psi.size() * 2);
        for (Eigen::Index k = 0; k < psi.size(); ++k) {
            next(2 * k) = psi(k) * v(0);
            next(2 * k + 1) = psi(k) * v(1);
        }
        psi = next;
    }
    return psi;
}

} // namespace symflow
