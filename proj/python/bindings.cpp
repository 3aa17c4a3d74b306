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
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "symflow/estimators.hpp"
#include "symflow/problem.hpp"

namespace py = pybind11;
using namespace symflow;

namespace {

std::vector<ComplexMatrix> subspace_basis(const Subspace &s) { return s.basis(); }

Subspace algebra_of(const std::vector<std::string> &generators, std::size_t n_qubits) {
    return Subspace::span(1 << n_qubits, algebra_from_pauli_strings(generators, n_qubits));
}

SymmetrySpec symmetry_of(const std::vector<std::string> &generators, std::size_t n_qubits,
                         const std::string &action) {
    return SymmetrySpec(algebra_of(generators, n_qubits), action_from_string(action));
}

py::dict report_dict(const SymGradReport &r) {
    py::dict d;
    d["cost"] = r.cost;
    d["m"] = r.m;
    d["omega"] = r.omega;
    d["gram"] = r.gram;
    d["vector_potential"] = r.vector_potential;
    d["partial"] = r.partial;
    d["projected"] = r.projected;
    return d;
}

BasisKind kind_of(const std::string &kind) {
    if (kind == "vertical") {
        return BasisKind::vertical;
    }
    if (kind == "equivariant") {
        return BasisKind::equivariant;
    }
    throw SpecError("basis kind must be 'vertical' or 'equivariant'");
}

} // namespace

PYBIND11_MODULE(_symflow, m) {
    m.doc() = "Symmetry-aware derivatives of parametrized quantum circuits";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<ShapeError>(m, "ShapeError", base.ptr());
    py::register_exception<SpecError>(m, "SpecError", base.ptr());
    py::register_exception<ContractViolation>(m, "ContractViolation", base.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());

    m.def("rank_tol", &rank_tol);
    m.def("set_rank_tol", &set_rank_tol, py::arg("tol"));

    py::class_<PauliSum>(m, "PauliSum")
        .def(py::init([](const std::string &text, std::size_t n) { return parse_pauli_sum(text, n); }),
             py::arg("text"), py::arg("n_qubits"))
        .def_property_readonly("n_qubits", &PauliSum::n_qubits)
        .def("matrix", [](const PauliSum &p) { return to_matrix(p); })
        .def("is_hermitian", [](const PauliSum &p) { return p.is_hermitian(); })
        .def("__str__", [](const PauliSum &p) { return format_pauli_sum(p); })
        .def("__repr__", [](const PauliSum &p) { return "PauliSum('" + format_pauli_sum(p) + "')"; })
        .def("__eq__", [](const PauliSum &a, const PauliSum &b) { return a == b; });
    m.def("pauli_decompose", [](const ComplexMatrix &x, double prune) {
        return format_pauli_sum(pauli_decompose(x, prune));
    }, py::arg("matrix"), py::arg("prune") = kPruneTol);
    m.def("expectation", [](const PauliSum &p, const ComplexVector &v) {
        return expectation(p, v);
    });

    py::class_<Subspace>(m, "Subspace")
        .def_property_readonly("dim", &Subspace::dim)
        .def_property_readonly("dim_ambient", &Subspace::dim_ambient)
        .def_property_readonly("basis", &subspace_basis)
        .def_property_readonly("coords", &Subspace::coords)
        .def("project", &Subspace::project)
        .def("contains", &Subspace::contains, py::arg("x"), py::arg("tol") = 1e-10)
        .def("format", [](const Subspace &s, const std::string &name) {
            return format_subspace(s, name);
        }, py::arg("name") = "subspace");
    m.def("algebra", &algebra_of, py::arg("generators"), py::arg("n_qubits"),
          "Real span of i*h for Hermitian Pauli sums h.");
    m.def("lie_closure", [](const std::vector<std::string> &gens, std::size_t n) {
        return lie_closure(algebra_from_pauli_strings(gens, n));
    }, py::arg("generators"), py::arg("n_qubits"));
    m.def("commutant", &commutant, py::arg("sub"), py::arg("d"));
    m.def("center", &center, py::arg("sub"));
    m.def("projector_distance", &projector_distance);
    m.def("twirl_project", &twirl_project);
    m.def("four_decomposition", [](const Subspace &t) {
        const FourDecomposition fd = four_decomposition(t, t.dim_ambient());
        py::dict d;
        d["r"] = fd.r;
        d["ut_centerless"] = fd.ut_centerless;
        d["center_t"] = fd.center_t;
        d["t_centerless"] = fd.t_centerless;
        return d;
    }, py::arg("t"));

    py::class_<CircuitSpec>(m, "Circuit")
        .def(py::init([](const std::string &json) { return circuit_from_json(json); }),
             py::arg("json"))
        .def_property_readonly("n_qubits", &CircuitSpec::n_qubits)
        .def_property_readonly("n_params", &CircuitSpec::n_params)
        .def("to_json", [](const CircuitSpec &c) { return circuit_to_json(c); })
        .def("apply", [](const CircuitSpec &c, const ParamPoint &t, const Statevector &psi0) {
            return apply(c, t, psi0);
        })
        .def("unitary", [](const CircuitSpec &c, const ParamPoint &t) { return build_unitary(c, t); })
        .def("state_partials", [](const CircuitSpec &c, const ParamPoint &t, const Statevector &psi0) {
            return state_partials(c, t, psi0);
        })
        .def("effective_generator", [](const CircuitSpec &c, const ParamPoint &t, int j,
                                       const std::string &side) {
            return effective_generator(c, t, j, side == "left" ? Side::left : Side::right);
        }, py::arg("theta"), py::arg("j"), py::arg("side") = "right")
        .def("cost", [](const CircuitSpec &c, const ParamPoint &t, const Statevector &psi0,
                        const PauliSum &obs) { return cost(c, t, psi0, obs); })
        .def("dla", [](const CircuitSpec &c) { return dla(c); });

    m.def("basis_state", &basis_state, py::arg("label"));
    m.def("random_product_state", &random_product_state, py::arg("n_qubits"), py::arg("seed"));
    m.def("random_theta", &random_theta, py::arg("n_params"), py::arg("seed"));

    py::class_<SymmetrySpec>(m, "Symmetry")
        .def(py::init(&symmetry_of), py::arg("generators"), py::arg("n_qubits"),
             py::arg("action") = "left")
        .def_property_readonly("algebra", &SymmetrySpec::algebra)
        .def_property_readonly("commutant", &SymmetrySpec::commutant)
        .def_property_readonly("action", [](const SymmetrySpec &s) { return to_string(s.action()); });

    m.def("covariant_derivative_cost", [](const SymmetrySpec &s, const CircuitSpec &c,
                                          const ParamPoint &t, const Statevector &psi0,
                                          const PauliSum &obs) {
        return report_dict(covariant_derivative_cost(s, c, t, psi0, obs));
    });
    m.def("equivariant_derivative_cost", [](const SymmetrySpec &s, const CircuitSpec &c,
                                            const ParamPoint &t, const Statevector &psi0,
                                            const PauliSum &obs) {
        return report_dict(equivariant_derivative_cost(s, c, t, psi0, obs));
    });
    m.def("vector_potential", &vector_potential);
    m.def("overlap_omega", [](const SymmetrySpec &s, const CircuitSpec &c, const ParamPoint &t,
                              const Statevector &psi0, const std::string &kind) {
        return overlap_omega(s, c, t, psi0, kind_of(kind));
    }, py::arg("sym"), py::arg("circuit"), py::arg("theta"), py::arg("psi0"),
          py::arg("kind") = "vertical");
    m.def("induced_algebra_split", [](const SymmetrySpec &s, const CircuitSpec &c,
                                      const ParamPoint &t, const Statevector &psi0) {
        const AlgebraSplit split = induced_algebra_split(s, c, t, psi0);
        return py::make_tuple(split.parallel, split.perpendicular);
    });

    m.def("fubini_study", [](const CircuitSpec &c, const ParamPoint &t, const Statevector &psi0) {
        return fubini_study(c, t, psi0).entries;
    });
    m.def("covariant_metric", [](const SymmetrySpec &s, const CircuitSpec &c, const ParamPoint &t,
                                 const Statevector &psi0) {
        return covariant_metric(s, c, t, psi0).entries;
    });

    m.def("hadamard_omega", [](const CircuitSpec &c, const ParamPoint &t, int j,
                               const ComplexMatrix &z_b, const Statevector &psi0,
                               const std::string &action, bool role_exchange) {
        return hadamard_omega(c, t, j, z_b, psi0, action_from_string(action), role_exchange);
    }, py::arg("circuit"), py::arg("theta"), py::arg("j"), py::arg("z_b"), py::arg("psi0"),
          py::arg("action") = "left", py::arg("role_exchange") = false);
    m.def("insertion_m", [](const CircuitSpec &c, const ParamPoint &t, const Statevector &psi0,
                            const PauliSum &obs, const ComplexMatrix &z_a,
                            const std::string &action, double h) {
        return insertion_m(c, t, psi0, obs, z_a, action_from_string(action), h);
    }, py::arg("circuit"), py::arg("theta"), py::arg("psi0"), py::arg("observable"),
          py::arg("z_a"), py::arg("action") = "left", py::arg("h") = 1e-5);

    m.def("optimize_problem", [](const std::string &spec_json, std::optional<std::uint64_t> seed) {
        ProblemSpec spec = problem_from_json(spec_json);
        if (!spec.circuit || !spec.initial_state || !spec.cost || !spec.optimizer) {
            throw SpecError("optimize needs circuit, initial_state, an observable or cost, and optimizer");
        }
        OptimizerSpec opt = *spec.optimizer;
        if (seed) {
            opt.seed = *seed;
            if (spec.initial_state_text.rfind("random_product:", 0) == 0) {
                spec.initial_state = random_product_state(spec.n_qubits, *seed);
            }
        }
        OptimizeOptions options;
        options.lr = opt.lr;
        options.max_iter = opt.max_iter;
        options.tol = opt.tol;
        options.monitors = spec.monitors;
        options.record_vector_potential = spec.record_vector_potential;
        const ParamPoint theta0 =
            opt.theta0 ? *opt.theta0 : random_theta(spec.circuit->n_params(), opt.seed);
        const OptTrace trace = optimize(opt.method, spec.symmetry ? &*spec.symmetry : nullptr,
                                        *spec.circuit, theta0, *spec.initial_state, *spec.cost,
                                        options);
        py::list costs;
        for (const auto &r : trace.records) {
            costs.append(r.cost);
        }
        const OptRecord &last = trace.records.back();
        py::dict d;
        d["converged"] = trace.converged;
        d["iterations"] = last.iteration;
        d["costs"] = costs;
        d["theta"] = last.theta;
        d["extra_labels"] = trace.extra_labels;
        d["extras"] = last.extras;
        std::ostringstream csv;
        write_trace_csv(csv, trace);
        d["csv"] = csv.str();
        return d;
    }, py::arg("spec_json"), py::arg("seed") = std::nullopt);
    m.def("builtin_problem_json", &builtin_problem_json, py::arg("name"));
}
