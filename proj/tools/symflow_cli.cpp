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
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "symflow/estimators.hpp"
#include "symflow/problem.hpp"

namespace {

using namespace symflow;

constexpr int kExitOk = 0;
constexpr int kExitSpec = 2;
constexpr int kExitContract = 3;
constexpr int kExitNoConvergence = 4;

struct Options {
    std::string spec_path;
    std::string theta;
    std::string kind = "covariant";
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<int> max_iter;
    std::optional<double> lr;
};

void write_output(const std::string &path, const std::string &text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw SpecError("cannot write '" + path + "'");
    }
    out << text;
}

ParamPoint theta_for(const ProblemSpec &spec, const Options &o, bool required) {
    const int p = spec.circuit->n_params();
    ParamPoint theta;
    if (!o.theta.empty()) {
        theta = parse_theta(o.theta);
    } else if (spec.theta) {
        theta = *spec.theta;
    } else if (required) {
        throw SpecError("no parameter point: pass --theta or set 'theta' in the problem file");
    } else {
        theta = ParamPoint::Zero(p);
    }
    if (theta.size() != p) {
        throw SpecError("theta has " + std::to_string(theta.size()) + " entries, circuit has " +
                        std::to_string(p) + " parameters");
    }
    return theta;
}

std::string vector_text(const RealVector &v) {
    std::ostringstream os;
    os << "[";
    char buf[64];
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%s%.12g", k ? ", " : "", v(k));
        os << buf;
    }
    os << "]";
    return os.str();
}

int cmd_decompose(const Options &o) {
    const ProblemSpec spec = load_problem(o.spec_path);
    if (!spec.symmetry) {
        throw SpecError("decompose needs a symmetry block");
    }
    const SymmetrySpec &sym = *spec.symmetry;
    const int d = sym.dim_ambient();
    const FourDecomposition fd = four_decomposition(sym.algebra(), d);
    std::ostringstream os;
    os << "algebra u(" << d << "), action " << to_string(sym.action()) << "\n";
    os << format_subspace(sym.algebra(), "t");
    os << "dims r/ut_centerless/center_t/t_centerless: " << fd.r.dim() << "/"
       << fd.ut_centerless.dim() << "/" << fd.center_t.dim() << "/" << fd.t_centerless.dim()
       << "\n";
    os << format_subspace(fd.r, "r");
    os << format_subspace(fd.ut_centerless, "ut_centerless");
    os << format_subspace(fd.center_t, "center_t");
    os << format_subspace(fd.t_centerless, "t_centerless");

    if (spec.circuit && spec.initial_state) {
        const ParamPoint theta = theta_for(spec, o, false);
        const StateFourDecomposition sd =
            state_four_decomposition(sym, *spec.circuit, theta, *spec.initial_state);
        const Statevector point = sym.action() == Action::theta
                                      ? *spec.initial_state
                                      : apply(*spec.circuit, theta, *spec.initial_state);
        os << "state tangent space: dim " << sd.tangent_dim << ", theta " << vector_text(theta)
           << "\n";
        os << format_tangents(sd.cov, point, "cov");
        os << format_tangents(sd.both, point, "both");
        os << format_tangents(sd.equi, point, "equi");
        os << format_tangents(sd.vert, point, "vert");
        os << "residual: dim " << sd.residual_dim << "\n";
        const AlgebraSplit split =
            induced_algebra_split(sym, *spec.circuit, theta, *spec.initial_state);
        os << format_subspace(split.parallel, "u_parallel");
        os << format_subspace(split.perpendicular, "u_perp");
    }
    write_output(o.out, os.str());
    return kExitOk;
}

int cmd_grad(const Options &o) {
    const ProblemSpec spec = load_problem(o.spec_path);
    if (!spec.circuit || !spec.initial_state || !spec.cost) {
        throw SpecError("grad needs circuit, initial_state and an observable or cost");
    }
    const CircuitSpec &c = *spec.circuit;
    const ParamPoint theta = theta_for(spec, o, true);
    const Statevector &psi0 = *spec.initial_state;
    const Statevector psi = apply(c, theta, psi0);
    const PauliSum m = spec.cost->effective_observable(psi);

    SymGradReport report;
    if (o.kind == "partial") {
        report = partial_derivative_cost(c, theta, psi0, m);
    } else if (o.kind == "equivariant" || o.kind == "covariant") {
        if (!spec.symmetry) {
            throw SpecError("--kind " + o.kind + " needs a symmetry block");
        }
        report = o.kind == "covariant" ? covariant_derivative_cost(*spec.symmetry, c, theta, psi0, m)
                                       : equivariant_derivative_cost(*spec.symmetry, c, theta, psi0, m);
    } else {
        throw SpecError("--kind must be partial, equivariant or covariant");
    }
    report.cost = spec.cost->value(psi);
    write_output(o.out, report_to_json(report, o.kind, theta) + "\n");
    return kExitOk;
}

int cmd_optimize(const Options &o) {
    ProblemSpec spec = load_problem(o.spec_path);
    if (!spec.circuit || !spec.initial_state || !spec.cost || !spec.optimizer) {
        throw SpecError("optimize needs circuit, initial_state, an observable or cost, and optimizer");
    }
    OptimizerSpec opt = *spec.optimizer;
    if (o.seed) {
        opt.seed = *o.seed;
        if (spec.initial_state_text.rfind("random_product:", 0) == 0) {
            spec.initial_state = random_product_state(spec.n_qubits, *o.seed);
        }
    }
    if (o.max_iter) {
        if (*o.max_iter < 0) {
            throw SpecError("--max-iter must be non-negative");
        }
        opt.max_iter = *o.max_iter;
    }
    if (o.lr) {
        if (!(*o.lr > 0.0)) {
            throw SpecError("--lr must be positive");
        }
        opt.lr = *o.lr;
    }
    const CircuitSpec &c = *spec.circuit;
    const ParamPoint theta0 = opt.theta0 ? *opt.theta0 : random_theta(c.n_params(), opt.seed);

    OptimizeOptions options;
    options.lr = opt.lr;
    options.max_iter = opt.max_iter;
    options.tol = opt.tol;
    options.monitors = spec.monitors;
    options.record_vector_potential = spec.record_vector_potential;
    const SymmetrySpec *sym = spec.symmetry ? &*spec.symmetry : nullptr;
    const OptTrace trace =
        optimize(opt.method, sym, c, theta0, *spec.initial_state, *spec.cost, options);

    std::ostringstream csv;
    write_trace_csv(csv, trace);
    const bool csv_on_stdout = o.out.empty() || o.out == "-";
    write_output(o.out, csv.str());

    const OptRecord &last = trace.records.back();
    std::ostringstream summary;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", last.cost);
    summary << "method " << to_string(opt.method) << " converged "
            << (trace.converged ? "true" : "false") << " iterations " << last.iteration
            << " final_cost " << buf << " theta " << vector_text(last.theta);
    for (std::size_t k = 0; k < spec.monitors.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%.12g", last.extras[k]);
        summary << " " << spec.monitors[k].label << " " << buf;
    }
    summary << "\n";
    (csv_on_stdout ? std::cerr : std::cout) << summary.str();
    if (!trace.converged) {
        std::cerr << "symflow: no convergence after " << opt.max_iter
                  << " iterations (gradient norm " << last.grad_norm << ")\n";
        return kExitNoConvergence;
    }
    return kExitOk;
}

int run(int argc, char **argv) {
    if (const char *env = std::getenv("SYMFLOW_TOL")) {
        char *end = nullptr;
        const double v = std::strtod(env, &end);
        if (end == env || *end != '\0' || !std::isfinite(v) || !(v > 0.0)) {
            std::cerr << "symflow: SYMFLOW_TOL must be a positive number\n";
            return kExitSpec;
        }
        set_rank_tol(v);
    }

    CLI::App app{"Symmetry-aware derivatives of parametrized quantum circuits"};
    app.require_subcommand(1);
    Options o;

    auto *decompose = app.add_subcommand("decompose", "Decompose u(d) and the state tangent space");
    decompose->add_option("spec", o.spec_path, "Problem spec JSON or builtin:<name>")->required();
    decompose->add_option("--theta", o.theta, "Comma-separated parameter point");
    decompose->add_option("--out", o.out, "Report file (default stdout)");

    auto *grad = app.add_subcommand("grad", "Derivative report as JSON");
    grad->add_option("spec", o.spec_path, "Problem spec JSON or builtin:<name>")->required();
    grad->add_option("--theta", o.theta, "Comma-separated parameter point");
    grad->add_option("--kind", o.kind, "partial, equivariant or covariant")
        ->check(CLI::IsMember({"partial", "equivariant", "covariant"}));
    grad->add_option("--out", o.out, "Report file (default stdout)");

    auto *opt = app.add_subcommand("optimize", "Run an optimizer and write a CSV trace");
    opt->add_option("spec", o.spec_path, "Problem spec JSON or builtin:<name>")->required();
    opt->add_option("--out", o.out, "Trace CSV file (default stdout)");
    opt->add_option("--seed", o.seed, "Seed for theta0 and random product inputs");
    opt->add_option("--max-iter", o.max_iter, "Maximum number of updates");
    opt->add_option("--lr", o.lr, "Learning rate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitSpec;
    }

    try {
        if (*decompose) {
            return cmd_decompose(o);
        }
        if (*grad) {
            return cmd_grad(o);
        }
        return cmd_optimize(o);
    } catch (const SpecError &e) {
        std::cerr << "symflow: spec error: " << e.what() << "\n";
        return kExitSpec;
    } catch (const ShapeError &e) {
        std::cerr << "symflow: shape error: " << e.what() << "\n";
        return kExitSpec;
    } catch (const ContractViolation &e) {
        std::cerr << "symflow: contract violation: " << e.what() << "\n";
        return kExitContract;
    } catch (const ConvergenceError &e) {
        std::cerr << "symflow: no convergence: " << e.what() << "\n";
        return kExitNoConvergence;
    }
}

} // namespace

int main(int argc, char **argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception &e) {
        std::cerr << "symflow: error: " << e.what() << "\n";
        return 1;
    }
}
