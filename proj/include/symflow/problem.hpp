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
#include <optional>
#include <string>
#include <vector>

#include "symflow/natgrad.hpp"

namespace symflow {

struct OptimizerSpec {
    Method method = Method::gd;
    double lr = 0.1;
    int max_iter = 2000;
    double tol = 1e-9;
    std::uint64_t seed = 0;
    /// Explicit starting point; otherwise sampled from `seed`.
    std::optional<ParamPoint> theta0;
};

/// Problem description shared by the CLI commands and the Python bindings.
struct ProblemSpec {
    int n_qubits = 0;
    std::optional<CircuitSpec> circuit;
    /// Text of the initial state entry, or "amplitudes".
    std::string initial_state_text;
    std::optional<Statevector> initial_state;
    std::vector<std::string> symmetry_generators;
    std::optional<SymmetrySpec> symmetry;
    std::optional<CostSpec> cost;
    std::optional<OptimizerSpec> optimizer;
    std::vector<Monitor> monitors;
    bool record_vector_potential = false;
    std::optional<ParamPoint> theta;
};

/// Gate list in the circuit JSON schema.
CircuitSpec circuit_from_json(const std::string &text);
std::string circuit_to_json(const CircuitSpec &c);

/// Basis label (0, 1, +, -), "random_product:<seed>" or a JSON amplitude list.
Statevector parse_initial_state(const std::string &text, int n_qubits);

/// Parses a problem spec. Malformed input raises SpecError; a non-closed
/// symmetry algebra raises ContractViolation.
ProblemSpec problem_from_json(const std::string &text);
/// Reads a file, or returns a built-in spec for "builtin:<name>".
ProblemSpec load_problem(const std::string &path);
/// JSON text of a built-in spec ("entangling").
std::string builtin_problem_json(const std::string &name);

/// Comma-separated list of reals.
ParamPoint parse_theta(const std::string &csv);

/// Flat JSON report with m, omega, gram, vector_potential, partial and projected.
std::string report_to_json(const SymGradReport &r, const std::string &kind,
                           const ParamPoint &theta);

} // namespace symflow
