# Copyright 2026 The symflow Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#     http://www.apache.org/licenses/LICENSE-2.0
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
import json
import math
import os
import subprocess

import numpy as np
import pytest

import symflow

GATE_EXAMPLE = json.dumps(
    {
        "n_qubits": 1,
        "n_params": 3,
        "gates": [
            {"h": "0.5*Y", "wires": [0], "param": 0},
            {"h": "0.5*X", "wires": [0], "param": 1},
            {"h": "I", "wires": [0], "param": 2, "scale": 1.0},
        ],
    }
)


def test_version_and_tolerance():
    assert symflow.__version__
    assert symflow.rank_tol() == pytest.approx(1e-10)


def test_pauli_sum_matrix():
    p = symflow.PauliSum("0.5*XZ - 1i*YI", 2)
    x = np.array([[0, 1], [1, 0]])
    z = np.diag([1, -1])
    y = np.array([[0, -1j], [1j, 0]])
    expected = 0.5 * np.kron(x, z) - 1j * np.kron(y, np.eye(2))
    assert np.allclose(p.matrix(), expected)
    assert not p.is_hermitian()


def test_four_decomposition_dimensions():
    cases = [
        (["Z"], 1, (2, 1, 1, 0)),
        (["I"], 1, (0, 3, 1, 0)),
        (["XI + IX", "YI + IY", "ZI + IZ"], 2, (11, 2, 0, 3)),
    ]
    for gens, n, dims in cases:
        fd = symflow.four_decomposition(symflow.algebra(gens, n))
        got = tuple(fd[k].dim for k in ("r", "ut_centerless", "center_t", "t_centerless"))
        assert got == dims


def test_circuit_and_generators():
    c = symflow.Circuit(GATE_EXAMPLE)
    theta = np.array([0.3, -0.7, 1.1])
    u = c.unitary(theta)
    assert np.allclose(u.conj().T @ u, np.eye(2))
    omega = c.effective_generator(theta, 1)
    x = np.array([[0, 1], [1, 0]])
    z = np.diag([1, -1])
    assert np.allclose(omega, -0.5j * (math.cos(0.3) * x + math.sin(0.3) * z))
    assert c.dla().dim == 4


def test_covariant_report_reconstruction():
    spec = json.loads(symflow.builtin_problem_json("entangling"))
    c = symflow.Circuit(json.dumps(spec["circuit"]))
    sym = symflow.Symmetry(["XI", "YI", "ZI"], 2, "left")
    psi0 = symflow.random_product_state(2, 4)
    theta = symflow.random_theta(3, 4)
    r = symflow.covariant_derivative_cost(sym, c, theta, psi0, symflow.PauliSum("ZZ + 0.3*XI", 2))
    assert np.allclose(r["partial"], r["projected"] + r["vector_potential"].T @ r["m"], atol=1e-10)


def test_estimators_agree():
    c = symflow.Circuit(GATE_EXAMPLE)
    theta = np.array([0.4, 1.3, -0.2])
    psi0 = symflow.basis_state("+")
    sym = symflow.Symmetry(["Z"], 1, "theta")
    omega = symflow.overlap_omega(sym, c, theta, psi0)
    z_b = sym.algebra.basis[0]
    for j in range(3):
        assert symflow.hadamard_omega(c, theta, j, z_b, psi0, "theta") == pytest.approx(omega[0, j], abs=1e-10)


def test_global_phase_metric_matches_fubini_study():
    c = symflow.Circuit(GATE_EXAMPLE)
    theta = np.array([0.4, 1.3, -0.2])
    psi0 = symflow.basis_state("0")
    f = symflow.fubini_study(c, theta, psi0)
    fs = symflow.covariant_metric(symflow.Symmetry(["I"], 1), c, theta, psi0)
    assert np.allclose(f, fs, atol=1e-12)


def test_errors_are_typed():
    with pytest.raises(symflow.ContractViolation):
        symflow.Symmetry(["X", "Y"], 1)
    with pytest.raises(symflow.SpecError):
        symflow.PauliSum("Q", 1)
    assert issubclass(symflow.SpecError, symflow.Error)


def test_entangling_demo():
    result = symflow.optimize_problem(symflow.builtin_problem_json("entangling"), seed=2)
    assert result["converged"]
    assert result["costs"][-1] < 1e-8
    assert abs(math.remainder(result["theta"][2] - math.pi, 2 * math.pi)) < 1e-3
    assert result["csv"].startswith("iter,theta_0,theta_1,theta_2,cost,grad_norm")


@pytest.mark.skipif("SYMFLOW_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_matches_bindings(tmp_path):
    out = tmp_path / "trace.csv"
    proc = subprocess.run(
        [os.environ["SYMFLOW_CLI"], "optimize", "builtin:entangling", "--seed", "2", "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    result = symflow.optimize_problem(symflow.builtin_problem_json("entangling"), seed=2)
    assert out.read_text() == result["csv"]
