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
#include "symflow/problem.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace symflow {

using nlohmann::json;

namespace {

json parse_json(const std::string &text, const std::string &what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        throw SpecError(what + ": invalid JSON: " + e.what());
    }
}

void check_keys(const json &j, const std::set<std::string> &allowed, const std::string &where) {
    if (!j.is_object()) {
        throw SpecError(where + " must be a JSON object");
    }
    for (const auto &item : j.items()) {
        if (allowed.count(item.key()) == 0) {
            throw SpecError(where + ": unknown key '" + item.key() + "'");
        }
    }
}

const json &require(const json &j, const std::string &key, const std::string &where) {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
        throw SpecError(where + ": missing '" + key + "'");
    }
    return *it;
}

int as_int(const json &j, const std::string &where) {
    if (!j.is_number_integer()) {
        throw SpecError(where + " must be an integer");
    }
    return j.get<int>();
}

double as_real(const json &j, const std::string &where) {
    if (!j.is_number()) {
        throw SpecError(where + " must be a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        throw SpecError(where + " must be finite");
    }
    return v;
}

std::string as_string(const json &j, const std::string &where) {
    if (!j.is_string()) {
        throw SpecError(where + " must be a string");
    }
    return j.get<std::string>();
}

PauliSum parse_pauli(const json &j, std::size_t n, const std::string &where) {
    try {
        return parse_pauli_sum(as_string(j, where), n);
    } catch (const SpecError &e) {
        throw SpecError(where + ": " + e.what());
    }
}

CircuitSpec circuit_from(const json &j) {
    check_keys(j, {"n_qubits", "n_params", "gates"}, "circuit");
    const int n = as_int(require(j, "n_qubits", "circuit"), "circuit.n_qubits");
    const int p = as_int(require(j, "n_params", "circuit"), "circuit.n_params");
    const json &gates_json = require(j, "gates", "circuit");
    if (!gates_json.is_array()) {
        throw SpecError("circuit.gates must be an array");
    }
    std::vector<Gate> gates;
    for (std::size_t k = 0; k < gates_json.size(); ++k) {
        const std::string where = "circuit.gates[" + std::to_string(k) + "]";
        const json &g = gates_json[k];
        check_keys(g, {"h", "wires", "param", "angle", "scale"}, where);
        Gate gate;
        const json &wires = require(g, "wires", where);
        if (!wires.is_array() || wires.empty()) {
            throw SpecError(where + ".wires must be a non-empty array");
        }
        for (const auto &w : wires) {
            gate.wires.push_back(as_int(w, where + ".wires"));
        }
        gate.generator = parse_pauli(require(g, "h", where), gate.wires.size(), where + ".h");
        const bool has_param = g.contains("param") && !g["param"].is_null();
        const bool has_angle = g.contains("angle") && !g["angle"].is_null();
        if (has_param == has_angle) {
            throw SpecError(where + ": exactly one of 'param' and 'angle' must be given");
        }
        if (has_param) {
            gate.param_index = as_int(g["param"], where + ".param");
        } else {
            gate.angle = as_real(g["angle"], where + ".angle");
        }
        if (g.contains("scale") && !g["scale"].is_null()) {
            gate.angle_scale = as_real(g["scale"], where + ".scale");
        }
        gates.push_back(std::move(gate));
    }
    return CircuitSpec(n, p, std::move(gates));
}

Statevector amplitudes_from(const json &j, int n) {
    if (!j.is_array()) {
        throw SpecError("initial_state amplitudes must be an array");
    }
    const auto d = static_cast<std::size_t>(1) << n;
    if (j.size() != d) {
        throw SpecError("initial_state has " + std::to_string(j.size()) +
                        " amplitudes, expected " + std::to_string(d));
    }
    Statevector psi(static_cast<Eigen::Index>(d));
    for (std::size_t k = 0; k < d; ++k) {
        const json &a = j[k];
        const std::string where = "initial_state[" + std::to_string(k) + "]";
        if (a.is_array()) {
            if (a.size() != 2) {
                throw SpecError(where + " must be a number or a [re, im] pair");
            }
            psi(static_cast<Eigen::Index>(k)) =
                complex_t(as_real(a[0], where), as_real(a[1], where));
        } else {
            psi(static_cast<Eigen::Index>(k)) = complex_t(as_real(a, where), 0.0);
        }
    }
    if (std::abs(psi.norm() - 1.0) > 1e-8) {
        throw SpecError("initial_state is not normalized (norm " + std::to_string(psi.norm()) +
                        ")");
    }
    return psi;
}

RealVector real_list(const json &j, const std::string &where) {
    if (!j.is_array()) {
        throw SpecError(where + " must be an array of numbers");
    }
    RealVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t k = 0; k < j.size(); ++k) {
        v(static_cast<Eigen::Index>(k)) = as_real(j[k], where);
    }
    return v;
}

json matrix_json(const RealMatrix &m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_json(const RealVector &v) {
    json out = json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        out.push_back(v(k));
    }
    return out;
}

} // namespace

CircuitSpec circuit_from_json(const std::string &text) {
    return circuit_from(parse_json(text, "circuit"));
}

std::string circuit_to_json(const CircuitSpec &c) {
    json gates = json::array();
    for (const auto &g : c.gates()) {
        json gj;
        gj["h"] = format_pauli_sum(g.generator);
        gj["wires"] = g.wires;
        if (g.param_index) {
            gj["param"] = *g.param_index;
            gj["angle"] = nullptr;
        } else {
            gj["param"] = nullptr;
            gj["angle"] = g.angle;
        }
        gj["scale"] = g.angle_scale;
        gates.push_back(std::move(gj));
    }
    json out;
    out["n_qubits"] = c.n_qubits();
    out["n_params"] = c.n_params();
    out["gates"] = std::move(gates);
    return out.dump(2);
}

Statevector parse_initial_state(const std::string &text, int n_qubits) {
    const std::string prefix = "random_product:";
    if (text.rfind(prefix, 0) == 0) {
        const std::string seed_text = text.substr(prefix.size());
        std::uint64_t seed = 0;
        const auto [ptr, ec] =
            std::from_chars(seed_text.data(), seed_text.data() + seed_text.size(), seed);
        if (ec != std::errc() || ptr != seed_text.data() + seed_text.size() || seed_text.empty()) {
            throw SpecError("initial_state: bad seed in '" + text + "'");
        }
        return random_product_state(n_qubits, seed);
    }
    if (!text.empty() && text.front() == '[') {
        return amplitudes_from(parse_json(text, "initial_state"), n_qubits);
    }
    if (static_cast<int>(text.size()) != n_qubits) {
        throw SpecError("initial_state label '" + text + "' has length " +
                        std::to_string(text.size()) + ", expected " + std::to_string(n_qubits));
    }
    try {
        return basis_state(text);
    } catch (const Error &e) {
        throw SpecError(std::string("initial_state: ") + e.what());
    }
}

ProblemSpec problem_from_json(const std::string &text) {
    const json j = parse_json(text, "problem spec");
    check_keys(j,
               {"name", "description", "n_qubits", "circuit", "initial_state", "symmetry",
                "observable", "cost", "optimizer", "monitors", "record_vector_potential",
                "theta"},
               "problem spec");
    ProblemSpec spec;

    if (j.contains("circuit")) {
        spec.circuit = circuit_from(j["circuit"]);
        spec.n_qubits = spec.circuit->n_qubits();
    }
    if (j.contains("n_qubits")) {
        const int n = as_int(j["n_qubits"], "n_qubits");
        if (spec.circuit && n != spec.n_qubits) {
            throw SpecError("n_qubits disagrees with circuit.n_qubits");
        }
        spec.n_qubits = n;
    }
    if (spec.n_qubits < 1) {
        throw SpecError("problem spec needs a circuit or n_qubits >= 1");
    }
    const auto n = static_cast<std::size_t>(spec.n_qubits);

    if (j.contains("initial_state")) {
        const json &s = j["initial_state"];
        if (s.is_string()) {
            spec.initial_state_text = s.get<std::string>();
            spec.initial_state = parse_initial_state(spec.initial_state_text, spec.n_qubits);
        } else {
            spec.initial_state_text = "amplitudes";
            spec.initial_state = amplitudes_from(s, spec.n_qubits);
        }
    }

    if (j.contains("symmetry")) {
        const json &s = j["symmetry"];
        check_keys(s, {"generators", "action"}, "symmetry");
        const json &gens = require(s, "generators", "symmetry");
        if (!gens.is_array() || gens.empty()) {
            throw SpecError("symmetry.generators must be a non-empty array");
        }
        for (std::size_t k = 0; k < gens.size(); ++k) {
            spec.symmetry_generators.push_back(
                as_string(gens[k], "symmetry.generators[" + std::to_string(k) + "]"));
        }
        Action action = Action::left;
        if (s.contains("action")) {
            action = action_from_string(as_string(s["action"], "symmetry.action"));
        }
        const auto elements = algebra_from_pauli_strings(spec.symmetry_generators, n);
        spec.symmetry.emplace(Subspace::span(1 << spec.n_qubits, elements), action);
    }

    if (j.contains("observable") && j.contains("cost")) {
        throw SpecError("give either 'observable' or 'cost', not both");
    }
    if (j.contains("observable")) {
        spec.cost = CostSpec(parse_pauli(j["observable"], n, "observable"));
    } else if (j.contains("cost")) {
        const json &c = j["cost"];
        check_keys(c, {"observable", "sum_of_squares"}, "cost");
        if (c.contains("observable") == c.contains("sum_of_squares")) {
            throw SpecError("cost needs exactly one of 'observable' and 'sum_of_squares'");
        }
        if (c.contains("observable")) {
            spec.cost = CostSpec(parse_pauli(c["observable"], n, "cost.observable"));
        } else {
            const json &list = c["sum_of_squares"];
            if (!list.is_array() || list.empty()) {
                throw SpecError("cost.sum_of_squares must be a non-empty array");
            }
            std::vector<PauliSum> ms;
            for (std::size_t k = 0; k < list.size(); ++k) {
                ms.push_back(
                    parse_pauli(list[k], n, "cost.sum_of_squares[" + std::to_string(k) + "]"));
            }
            spec.cost = CostSpec::sum_of_squares(std::move(ms));
        }
    }

    if (j.contains("optimizer")) {
        const json &o = j["optimizer"];
        check_keys(o, {"method", "lr", "max_iter", "tol", "seed", "theta0"}, "optimizer");
        OptimizerSpec opt;
        if (o.contains("method")) {
            opt.method = method_from_string(as_string(o["method"], "optimizer.method"));
        }
        if (o.contains("lr")) {
            opt.lr = as_real(o["lr"], "optimizer.lr");
        }
        if (o.contains("max_iter")) {
            opt.max_iter = as_int(o["max_iter"], "optimizer.max_iter");
        }
        if (o.contains("tol")) {
            opt.tol = as_real(o["tol"], "optimizer.tol");
        }
        if (o.contains("seed")) {
            if (!o["seed"].is_number_unsigned()) {
                throw SpecError("optimizer.seed must be a non-negative integer");
            }
            opt.seed = o["seed"].get<std::uint64_t>();
        }
        if (o.contains("theta0")) {
            opt.theta0 = real_list(o["theta0"], "optimizer.theta0");
        }
        if (!(opt.lr > 0.0) || opt.max_iter < 0 || opt.tol < 0.0) {
            throw SpecError("optimizer needs lr > 0, max_iter >= 0 and tol >= 0");
        }
        if (opt.method == Method::cqng && !spec.symmetry) {
            throw SpecError("optimizer method cqng needs a symmetry block");
        }
        spec.optimizer = opt;
    }

    if (j.contains("monitors")) {
        const json &list = j["monitors"];
        if (!list.is_array()) {
            throw SpecError("monitors must be an array");
        }
        for (std::size_t k = 0; k < list.size(); ++k) {
            const std::string where = "monitors[" + std::to_string(k) + "]";
            check_keys(list[k], {"label", "observable", "after_gates"}, where);
            Monitor m;
            m.label = as_string(require(list[k], "label", where), where + ".label");
            m.observable = parse_pauli(require(list[k], "observable", where), n, where);
            if (list[k].contains("after_gates")) {
                const int g = as_int(list[k]["after_gates"], where + ".after_gates");
                if (g < 0 || (spec.circuit && g > static_cast<int>(spec.circuit->gates().size()))) {
                    throw SpecError(where + ".after_gates out of range");
                }
                m.after_gates = static_cast<std::size_t>(g);
            }
            spec.monitors.push_back(std::move(m));
        }
    }
    if (j.contains("record_vector_potential")) {
        if (!j["record_vector_potential"].is_boolean()) {
            throw SpecError("record_vector_potential must be a boolean");
        }
        spec.record_vector_potential = j["record_vector_potential"].get<bool>();
    }
    if (j.contains("theta")) {
        spec.theta = real_list(j["theta"], "theta");
    }

    if (spec.circuit) {
        const int p = spec.circuit->n_params();
        if (spec.theta && spec.theta->size() != p) {
            throw SpecError("theta has the wrong length for the circuit");
        }
        if (spec.optimizer && spec.optimizer->theta0 && spec.optimizer->theta0->size() != p) {
            throw SpecError("optimizer.theta0 has the wrong length for the circuit");
        }
    }
    return spec;
}

std::string builtin_problem_json(const std::string &name) {
    if (name == "entangling") {
        return R"({
  "name": "entangling",
  "circuit": {
    "n_qubits": 2,
    "n_params": 3,
    "gates": [
      {"h": "0.5*Y", "wires": [0], "param": 0},
      {"h": "0.5*Y", "wires": [1], "param": 1},
      {"h": "0.25*XI - 0.25*XZ", "wires": [0, 1], "param": 2}
    ]
  },
  "initial_state": "random_product:0",
  "symmetry": {"generators": ["XI", "YI", "ZI"], "action": "left"},
  "cost": {"sum_of_squares": ["XI", "YI", "ZI"]},
  "optimizer": {"method": "gd", "lr": 0.5, "max_iter": 2000, "tol": 1e-9, "seed": 0},
  "monitors": [
    {"label": "X1_pre", "observable": "XI", "after_gates": 2},
    {"label": "Z2_pre", "observable": "IZ", "after_gates": 2}
  ],
  "record_vector_potential": true
})";
    }
    throw SpecError("unknown built-in spec '" + name + "'");
}

ProblemSpec load_problem(const std::string &path) {
    const std::string prefix = "builtin:";
    if (path.rfind(prefix, 0) == 0) {
        return problem_from_json(builtin_problem_json(path.substr(prefix.size())));
    }
    std::ifstream in(path);
    if (!in) {
        throw SpecError("cannot read spec file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return problem_from_json(ss.str());
}

ParamPoint parse_theta(const std::string &csv) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const std::size_t end = std::min(csv.find(',', pos), csv.size());
        std::string item = csv.substr(pos, end - pos);
        const auto first = item.find_first_not_of(" \t");
        const auto last = item.find_last_not_of(" \t");
        item = first == std::string::npos ? "" : item.substr(first, last - first + 1);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc() || ptr != item.data() + item.size() ||
            !std::isfinite(v)) {
            throw SpecError("--theta: cannot parse '" + item + "' as a real number");
        }
        values.push_back(v);
        pos = end + 1;
    }
    ParamPoint theta(static_cast<Eigen::Index>(values.size()));
    for (std::size_t k = 0; k < values.size(); ++k) {
        theta(static_cast<Eigen::Index>(k)) = values[k];
    }
    return theta;
}

std::string report_to_json(const SymGradReport &r, const std::string &kind,
                           const ParamPoint &theta) {
    json out;
    out["kind"] = kind;
    out["theta"] = vector_json(theta);
    out["cost"] = r.cost;
    out["m"] = vector_json(r.m);
    out["omega"] = matrix_json(r.omega);
    out["gram"] = matrix_json(r.gram);
    out["vector_potential"] = matrix_json(r.vector_potential);
    out["partial"] = vector_json(r.partial);
    out["projected"] = vector_json(r.projected);
    return out.dump(2);
}

} // namespace symflow
