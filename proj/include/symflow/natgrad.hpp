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
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "symflow/symgrad.hpp"

namespace symflow {

enum class MetricKind { fubini_study, covariant };

struct MetricMatrix {
    RealMatrix entries;
    MetricKind kind = MetricKind::fubini_study;
};

/**
 * @brief Cost function: a single expectation <M>, or a sum of squared
 * expectations sum_k <M_k>^2.
 */
class CostSpec {
  public:
    CostSpec(PauliSum observable); // NOLINT(google-explicit-constructor)
    static CostSpec sum_of_squares(std::vector<PauliSum> observables);

    [[nodiscard]] bool is_sum_of_squares() const { return squares_; }
    [[nodiscard]] const std::vector<PauliSum> &observables() const { return observables_; }
    [[nodiscard]] std::size_t n_qubits() const { return observables_.front().n_qubits(); }

    [[nodiscard]] double value(const Statevector &psi) const;
    /// Hermitian M_eff with dC = 2 Re<psi|M_eff|dpsi> for every tangent dpsi at psi.
    [[nodiscard]] PauliSum effective_observable(const Statevector &psi) const;

  private:
    CostSpec(std::vector<PauliSum> observables, bool squares);

    std::vector<PauliSum> observables_;
    bool squares_ = false;
};

MetricMatrix fubini_study(const CircuitSpec &c, const ParamPoint &theta, const Statevector &psi0);
/// Gram matrix of the covariant state derivatives.
MetricMatrix covariant_metric(const SymmetrySpec &sym, const CircuitSpec &c,
                              const ParamPoint &theta, const Statevector &psi0);

double cost_value(const CircuitSpec &c, const ParamPoint &theta, const Statevector &psi0,
                  const CostSpec &cost);
RealVector cost_gradient(const CircuitSpec &c, const ParamPoint &theta, const Statevector &psi0,
                         const CostSpec &cost);
/// D_j C for every j.
RealVector covariant_gradient(const SymmetrySpec &sym, const CircuitSpec &c,
                              const ParamPoint &theta, const Statevector &psi0,
                              const CostSpec &cost);

ParamPoint gd_step(const CircuitSpec &c, const ParamPoint &theta, const Statevector &psi0,
                   const CostSpec &cost, double lr);
/// theta - lr * 1/2 * F^+ grad C
ParamPoint qng_step(const CircuitSpec &c, const ParamPoint &theta, const Statevector &psi0,
                    const CostSpec &cost, double lr);
/// theta - lr * 1/2 * (F^S)^+ grad^S C
ParamPoint cqng_step(const SymmetrySpec &sym, const CircuitSpec &c, const ParamPoint &theta,
                     const Statevector &psi0, const CostSpec &cost, double lr);

enum class Method { gd, qng, cqng };
std::string to_string(Method m);
Method method_from_string(const std::string &s);

/// Expectation value recorded along a trajectory, optionally after the first gates only.
struct Monitor {
    std::string label;
    PauliSum observable;
    std::optional<std::size_t> after_gates;
};

struct OptimizeOptions {
    double lr = 0.1;
    int max_iter = 2000;
    double tol = 1e-9;
    std::vector<Monitor> monitors;
    /// Record A(a, j) entries when a symmetry is supplied.
    bool record_vector_potential = false;
};

struct OptRecord {
    int iteration = 0;
    ParamPoint theta;
    double cost = 0.0;
    double grad_norm = 0.0;
    std::vector<double> extras;
};

struct OptTrace {
    Method method = Method::gd;
    int n_params = 0;
    std::vector<std::string> extra_labels;
    std::vector<OptRecord> records;
    bool converged = false;
};

/// Runs until the gradient norm drops below tol or max_iter updates were made.
OptTrace optimize(Method method, const SymmetrySpec *sym, const CircuitSpec &c,
                  const ParamPoint &theta0, const Statevector &psi0, const CostSpec &cost,
                  const OptimizeOptions &options);

/// CSV with header iter,theta_0..theta_{p-1},cost,grad_norm[,extras...].
void write_trace_csv(std::ostream &os, const OptTrace &trace);

/// Uniform angles in [0, 2 pi).
ParamPoint random_theta(int n_params, std::uint64_t seed);
/// Product of independently sampled single-qubit states.
Statevector random_product_state(int n_qubits, std::uint64_t seed);

} // namespace symflow
