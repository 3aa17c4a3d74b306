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
#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace symflow;
using oracle::Gen;
using oracle::ket;

namespace {

SymmetrySpec symmetry(const std::vector<std::string> &words, std::size_t n, Action action) {
    return SymmetrySpec(Subspace::span(1 << n, algebra_from_pauli_strings(words, n)), action);
}

double expval(const ComplexMatrix &m, const ComplexVector &v) { return v.dot(m * v).real(); }

/// Vertical projection at psi with the oracle Gram-Schmidt.
ComplexVector remove_vertical(const ComplexVector &v, const std::vector<ComplexMatrix> &t, const ComplexVector &psi) {
    std::vector<ComplexVector> vert;
    for (const auto &x : t) {
        vert.push_back(x * psi);
    }
    return v - oracle::project_onto(oracle::onb(vert), v);
}

ComplexVector keep_span(const ComplexVector &v, const std::vector<ComplexMatrix> &t, const ComplexVector &psi) {
    std::vector<ComplexVector> span;
    for (const auto &x : t) {
        span.push_back(x * psi);
    }
    return oracle::project_onto(oracle::onb(span), v);
}

} // namespace

TEST_CASE("gate-level derivatives of the single-qubit example", "[symgrad]") {
    const CircuitSpec c = oracle::gate_example_circuit();
    const SymmetrySpec sym = symmetry({"Z"}, 1, Action::theta);
    const ComplexMatrix X = oracle::word("X");
    const ComplexMatrix Y = oracle::word("Y");
    const ComplexMatrix Z = oracle::word("Z");
    Gen gen(61);
    for (int k = 0; k < 100; ++k) {
        const RealVector th = gen.theta(3);
        const ComplexMatrix u = build_unitary(c, th);
        const double c1 = std::cos(th(0));
        const double s1 = std::sin(th(0));
        const complex_t mh(0, -0.5);
        CHECK((covariant_derivative_unitary(c, th, 0, sym) - mh * u * Y).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(equivariant_derivative_unitary(c, th, 0, sym).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((covariant_derivative_unitary(c, th, 1, sym) - mh * c1 * u * X).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((equivariant_derivative_unitary(c, th, 1, sym) - mh * s1 * u * Z).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((covariant_derivative_unitary(c, th, 2, sym) - kI * u).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((equivariant_derivative_unitary(c, th, 2, sym) - kI * u).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("state-level derivatives of the single-qubit example", "[symgrad]") {
    const CircuitSpec c = oracle::gate_example_circuit();
    const ComplexVector plus = ket("+");
    Gen gen(62);
    SECTION("theta action") {
        const SymmetrySpec sym = symmetry({"Z"}, 1, Action::theta);
        for (int k = 0; k < 20; ++k) {
            const RealVector th = gen.theta(3);
            const auto partials = state_partials(c, th, plus);
            const ComplexMatrix u = build_unitary(c, th);
            const double c1 = std::cos(th(0));
            CHECK((covariant_derivative_state(sym, c, th, 0, plus) - partials[0]).norm() < 1e-10);
            CHECK((covariant_derivative_state(sym, c, th, 1, plus) - complex_t(0, -c1 / 2) * u * plus).norm() < 1e-10);
            CHECK((covariant_derivative_state(sym, c, th, 2, plus) - partials[2]).norm() < 1e-10);
            CHECK(equivariant_derivative_state(sym, c, th, 0, plus).norm() < 1e-10);
            CHECK((equivariant_derivative_state(sym, c, th, 1, plus) - partials[1]).norm() < 1e-10);
            CHECK((equivariant_derivative_state(sym, c, th, 2, plus) - partials[2]).norm() < 1e-10);
        }
    }
    SECTION("left action") {
        const SymmetrySpec sym = symmetry({"Z"}, 1, Action::left);
        for (int k = 0; k < 20; ++k) {
            const RealVector th = gen.theta(3);
            const ComplexVector psi = apply(c, th, plus);
            const auto partials = state_partials(c, th, plus);
            const double s1 = std::sin(th(0));
            const double c2 = std::cos(th(1));
            CHECK((covariant_derivative_state(sym, c, th, 0, plus) -
                   complex_t(0, -c2 / 2) * (oracle::word("Y") * psi))
                      .norm() < 1e-10);
            CHECK((covariant_derivative_state(sym, c, th, 1, plus) - partials[1]).norm() < 1e-10);
            CHECK((covariant_derivative_state(sym, c, th, 2, plus) -
                   (kI * psi + complex_t(0, s1 * c2) * (oracle::word("Z") * psi)))
                      .norm() < 1e-10);
            const auto report = equivariant_derivative_cost(sym, c, th, plus, parse_pauli_sum("Z", 1));
            CHECK(std::abs(report.cost + s1 * c2) < 1e-12);
        }
    }
}

TEST_CASE("state derivatives match the projection oracle", "[symgrad][property]") {
    Gen gen(63);
    for (int k = 0; k < 30; ++k) {
        const int n = gen.integer(1, 3);
        const int p = gen.integer(1, 4);
        const CircuitSpec c = gen.circuit(n, p, gen.integer(0, 1));
        const SymmetrySpec sym(lie_closure({kI * to_matrix(gen.pauli_sum(n, 2))}),
                               gen.integer(0, 1) ? Action::left : Action::theta);
        const RealVector th = gen.theta(p);
        const ComplexVector psi0 = gen.state(c.dim());
        const ComplexMatrix u = build_unitary(c, th);
        const ComplexVector psi = u * psi0;
        std::vector<ComplexMatrix> vt = sym.algebra().basis();
        std::vector<ComplexMatrix> et = sym.commutant().basis();
        if (sym.action() == Action::theta) {
            for (auto &x : vt) {
                x = u * x * u.adjoint();
            }
            for (auto &x : et) {
                x = u * x * u.adjoint();
            }
        }
        for (int j = 0; j < p; ++j) {
            const ComplexVector fd = oracle::central_diff(
                [&](const RealVector &t) { return ComplexVector(oracle::circuit_unitary(c, t) * psi0); }, th, j);
            CHECK((covariant_derivative_state(sym, c, th, j, psi0) - remove_vertical(fd, vt, psi)).norm() < 1e-6);
            CHECK((equivariant_derivative_state(sym, c, th, j, psi0) - keep_span(fd, et, psi)).norm() < 1e-6);
        }
    }
}

TEST_CASE("cost reports: reconstruction, formula cross-checks and finite differences", "[symgrad][property]") {
    Gen gen(64);
    for (int k = 0; k < 30; ++k) {
        const int n = gen.integer(1, 3);
        const int p = gen.integer(1, 4);
        const CircuitSpec c = gen.circuit(n, p, gen.integer(0, 1));
        const SymmetrySpec sym(lie_closure({kI * to_matrix(gen.pauli_sum(n, 2)), kI * to_matrix(gen.pauli_sum(n, 1))}),
                               gen.integer(0, 1) ? Action::left : Action::theta);
        const RealVector th = gen.theta(p);
        const ComplexVector psi0 = gen.state(c.dim());
        const PauliSum m = gen.pauli_sum(n, 3);
        const ComplexMatrix mm = to_matrix(m);
        const ComplexVector psi = apply(c, th, psi0);

        const auto cov = covariant_derivative_cost(sym, c, th, psi0, m);
        const auto eqv = equivariant_derivative_cost(sym, c, th, psi0, m);
        CHECK((cov.partial - cov.projected - cov.vector_potential.transpose() * cov.m).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((cov.vector_potential - vector_potential(sym, c, th, psi0)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((cov.omega - overlap_omega_anticommutator(sym, c, th, psi0, BasisKind::vertical)).cwiseAbs().maxCoeff() <
              1e-10);
        CHECK((eqv.omega - overlap_omega_anticommutator(sym, c, th, psi0, BasisKind::equivariant))
                  .cwiseAbs()
                  .maxCoeff() < 1e-10);
        for (auto kind : {BasisKind::vertical, BasisKind::equivariant}) {
            CHECK((symmetry_derivative(sym, c, th, psi0, m, kind) -
                   symmetry_derivative_commutator(sym, c, th, psi0, m, kind))
                      .cwiseAbs()
                      .maxCoeff() < 1e-10);
        }

        // m_a by finite differences of the transformed cost.
        const auto &basis = sym.algebra().basis();
        for (std::size_t a = 0; a < basis.size(); ++a) {
            auto transformed = [&](const RealVector &s) {
                const ComplexMatrix g = oracle::expm(s(0) * basis[a]);
                const ComplexVector v =
                    sym.action() == Action::left ? ComplexVector(g * psi) : apply(c, th, ComplexVector(g * psi0));
                RealVector out(1);
                out(0) = expval(mm, v);
                return out;
            };
            const double fd = oracle::central_diff(transformed, RealVector::Zero(1), 0)(0);
            CHECK(std::abs(cov.m(static_cast<Eigen::Index>(a)) - fd) < 1e-6);
        }
        for (int j = 0; j < p; ++j) {
            const double fd = oracle::central_diff(
                [&](const RealVector &t) {
                    RealVector out(1);
                    out(0) = expval(mm, oracle::circuit_unitary(c, t) * psi0);
                    return out;
                },
                th, j)(0);
            CHECK(std::abs(cov.partial(j) - fd) < 1e-6);
            const ComplexVector mpsi = mm * psi;
            CHECK(std::abs(cov.projected(j) -
                           2.0 * oracle::re_overlap(mpsi, covariant_derivative_state(sym, c, th, j, psi0))) < 1e-10);
            CHECK(std::abs(eqv.projected(j) -
                           2.0 * oracle::re_overlap(mpsi, equivariant_derivative_state(sym, c, th, j, psi0))) < 1e-10);
        }
        const auto plain = partial_derivative_cost(c, th, psi0, m);
        CHECK((plain.partial - cov.partial).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(std::abs(plain.cost - cov.cost) < 1e-12);
    }
}

TEST_CASE("overlap_omega_commuting applies only to commuting circuits", "[symgrad]") {
    Gen gen(65);
    const CircuitSpec commuting(2, 3,
                                {oracle::make_gate("0.5*ZI", {0, 1}, 0), oracle::make_gate("0.5*ZZ", {0, 1}, 1),
                                 oracle::make_gate("0.5*Z", {1}, 2)});
    REQUIRE(has_commuting_generators(commuting));
    const SymmetrySpec sym = symmetry({"XX", "ZZ", "YY"}, 2, Action::theta);
    const ComplexVector psi0 = gen.state(4);
    for (int k = 0; k < 10; ++k) {
        const RealVector th = gen.theta(3);
        for (auto kind : {BasisKind::vertical, BasisKind::equivariant}) {
            CHECK((overlap_omega_commuting(sym, commuting, th, psi0, kind) -
                   overlap_omega(sym, commuting, th, psi0, kind))
                      .cwiseAbs()
                      .maxCoeff() < 1e-10);
        }
    }
    CHECK_FALSE(has_commuting_generators(oracle::gate_example_circuit()));
    CHECK_THROWS_AS(overlap_omega_commuting(symmetry({"Z"}, 1, Action::theta), oracle::gate_example_circuit(),
                                            RealVector::Zero(3), ket("0"), BasisKind::vertical),
                    ContractViolation);
}

TEST_CASE("vector potential of the entangling circuit", "[symgrad]") {
    const CircuitSpec c = oracle::entangling_circuit();
    const SymmetrySpec sym = symmetry({"XI", "YI", "ZI"}, 2, Action::left);
    const ComplexMatrix X = oracle::word("X");
    const ComplexMatrix Y = oracle::word("Y");
    const ComplexMatrix Z = oracle::word("Z");
    const ComplexMatrix P0 = 0.5 * (oracle::word("I") + Z);
    const ComplexMatrix P1 = 0.5 * (oracle::word("I") - Z);
    Gen gen(66);
    for (int k = 0; k < 50; ++k) {
        RealVector th = gen.theta(3);
        if (k % 5 == 0) {
            th(2) = oracle::kPi;
        }
        const ComplexVector a = gen.state(2);
        const ComplexVector b = gen.state(2);
        const ComplexVector a1 = oracle::ry(th(0)) * a;
        const ComplexVector b2 = oracle::ry(th(1)) * b;
        const double c3 = std::cos(th(2));
        const double s3 = std::sin(th(2));
        const double ct = std::cos(th(2) / 2);
        const double st = std::sin(th(2) / 2);
        RealMatrix expected(3, 3);
        expected << 0, expval(X, a1) * expval(Y, b2), expval(P1, b2), expval(P0, b2) + c3 * expval(P1, b2),
            ct * (ct * expval(Y, a1) - st * expval(Z, a1)) * expval(Y, b2), 0, s3 * expval(P1, b2),
            ct * (ct * expval(Z, a1) + st * expval(Y, a1)) * expval(Y, b2), 0;
        expected *= -0.5;
        const RealMatrix got = vector_potential(sym, c, th, oracle::kron(a, b));
        CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-10);
        if (k % 5 == 0) {
            CHECK(std::abs(got(1, 1)) < 1e-10);
            CHECK(std::abs(got(2, 0)) < 1e-10);
            CHECK(std::abs(got(2, 1)) < 1e-10);
            CHECK(std::abs(got(1, 0) + 0.5 * expval(Z, b2)) < 1e-10);
        }
    }
}

TEST_CASE("covariant derivative is equivariant under local symmetry transformations", "[symgrad][property]") {
    Gen gen(67);
    for (int k = 0; k < 20; ++k) {
        const int n = gen.integer(1, 2);
        const int p = gen.integer(1, 4);
        const CircuitSpec c = gen.circuit(n, p);
        const SymmetrySpec sym(lie_closure({kI * to_matrix(gen.pauli_sum(n, 2)), kI * to_matrix(gen.pauli_sum(n, 2))}),
                               Action::left);
        const auto &t = sym.algebra().basis();
        const RealVector th = gen.theta(p);
        const ComplexVector psi0 = gen.state(c.dim());
        const ComplexVector psi = apply(c, th, psi0);
        // s(theta) = prod_k exp(f_k(theta) x_k) with f_k(theta) = w_k . sin(theta).
        std::vector<RealVector> w;
        for (std::size_t a = 0; a < t.size(); ++a) {
            RealVector wa(p);
            for (int j = 0; j < p; ++j) {
                wa(j) = gen.uniform(-1.0, 1.0);
            }
            w.push_back(wa);
        }
        std::vector<ComplexMatrix> factors;
        ComplexMatrix s = ComplexMatrix::Identity(c.dim(), c.dim());
        for (std::size_t a = 0; a < t.size(); ++a) {
            factors.push_back(oracle::expm(w[a].dot(th.array().sin().matrix()) * t[a]));
            s = factors.back() * s;
        }
        const ComplexVector psi_s = s * psi;
        const auto partials = state_partials(c, th, psi0);
        for (int j = 0; j < p; ++j) {
            ComplexVector d_psi_s = s * partials[static_cast<std::size_t>(j)];
            for (std::size_t a = 0; a < t.size(); ++a) {
                ComplexMatrix ds = ComplexMatrix::Identity(c.dim(), c.dim());
                for (std::size_t b = 0; b < t.size(); ++b) {
                    ds = factors[b] * ds;
                    if (b == a) {
                        ds = (w[a](j) * std::cos(th(j))) * t[a] * ds;
                    }
                }
                d_psi_s += ds * psi;
            }
            const ComplexVector lhs = remove_vertical(d_psi_s, t, psi_s);
            const ComplexVector rhs = s * covariant_derivative_state(sym, c, th, j, psi0);
            CHECK((lhs - rhs).norm() < 1e-10);
        }
    }
}

TEST_CASE("symgrad input validation", "[symgrad]") {
    const SymmetrySpec sym = symmetry({"ZI"}, 2, Action::left);
    const CircuitSpec c = oracle::gate_example_circuit();
    CHECK_THROWS_AS(covariant_derivative_cost(sym, c, RealVector::Zero(3), ket("0"), parse_pauli_sum("Z", 1)),
                    ShapeError);
    const SymmetrySpec sym1 = symmetry({"Z"}, 1, Action::left);
    CHECK_THROWS_AS(covariant_derivative_state(sym1, c, RealVector::Zero(3), 5, ket("0")), ShapeError);
    CHECK_THROWS_AS(covariant_derivative_cost(sym1, c, RealVector::Zero(3), ket("0"), parse_pauli_sum("ZZ", 2)),
                    ShapeError);
}
