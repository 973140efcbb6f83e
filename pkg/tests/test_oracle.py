import ast
import math
from pathlib import Path

import numpy as np
import pytest

import oqgt.oracle as oracle
from oqgt import ReferenceState, oqgt, oqgt_compose_additive, time_evolution_family
from oqgt.oracle import (
    OracleReport,
    PauliString,
    additivity_oracle,
    additivity_trial,
    build_xy_hamiltonian,
    full_chain_family,
    ground_state,
    hamiltonian_paths_oracle,
    kron_xy_hamiltonian,
    splitting_oracle,
    splitting_trial,
)
from oqgt.validate import chain_additivity_oracle, mode_oracle


def test_pauli_string():
    s = PauliString("XZ", 0.5)
    assert s.n_sites == 2
    assert np.allclose(s.to_matrix(), 0.5 * np.kron([[0, 1], [1, 0]], [[1, 0], [0, -1]]))
    assert PauliString.on_sites(3, {2: "Y", 3: "X"}).factors == "XIY"
    with pytest.raises(ValueError):
        PauliString("XA")


def test_hamiltonian_size_limits():
    for n in (2, 4, 13):
        with pytest.raises(ValueError):
            build_xy_hamiltonian(n, 1.0, 1.0, 0.0)


def test_strong_field_limit():
    n, lam = 3, 50.0
    gs = ground_state(build_xy_hamiltonian(n, lam, 0.0, 0.0))
    assert gs.energy == pytest.approx(-n * lam, abs=1.0)
    assert abs(gs.vector[0]) > 0.999  # all spins up


def test_rotation_preserves_spectrum():
    a = np.linalg.eigvalsh(build_xy_hamiltonian(5, 0.7, 0.4, 0.0))
    b = np.linalg.eigvalsh(build_xy_hamiltonian(5, 0.7, 0.4, 1.234))
    assert np.max(np.abs(a - b)) < 1e-10


def test_two_construction_paths():
    h = build_xy_hamiltonian(3, 1.0, 1.0, 0.0)
    assert np.max(np.abs(h - h.conj().T)) <= 1e-14
    assert np.max(np.abs(h - kron_xy_hamiltonian(3, 1.0, 1.0, 0.0))) <= 1e-14
    rep = hamiltonian_paths_oracle(seed=1, samples=10)
    assert rep.passed, rep.to_line()


def test_ground_state_examples():
    gs = ground_state(np.diag([-1.0, 1.0]))
    assert np.allclose(gs.vector, [1, 0]) and not gs.degenerate
    gs = ground_state(np.array([[0, 1], [1, 0]]))
    assert np.allclose(gs.vector, np.array([1, -1]) / math.sqrt(2))
    assert ground_state(np.eye(2)).degenerate


def test_ground_state_deterministic():
    h = build_xy_hamiltonian(5, 2.0, 1.0, 0.3)
    assert np.array_equal(ground_state(h).vector, ground_state(h.copy()).vector)


def test_full_chain_family_at_t0():
    gs = ground_state(build_xy_hamiltonian(5, 2.0, 1.0, 0.3))
    q = oqgt(full_chain_family(5, 0.0), ReferenceState.pure(gs.vector), [2.0, 1.0, 0.3]).Q
    assert np.all(q == 0)


def test_full_chain_size_limit():
    with pytest.raises(ValueError):
        full_chain_family(11, 1.0)


def test_full_chain_analytic_derivative_matches_differences():
    fam = full_chain_family(3, 0.7)
    fd = fam.with_finite_differences(stencil="ridders")
    p = [1.3, 0.6, 0.4]
    for mu in range(3):
        assert np.max(np.abs(fam.derivative(p, mu) - fd.derivative(p, mu))) < 1e-9


def test_additivity_examples():
    rng = np.random.default_rng(0)
    h = oracle._qubit_factor(rng)
    rho = oracle._random_mixed(rng, 2)
    q = oqgt(time_evolution_family(h, 1.2, 2), rho, [0.3, 0.4])
    assert np.allclose(oqgt_compose_additive([q, q]).Q, 2 * q.Q)
    const = lambda c: np.diag([0.3, -0.2])
    assert additivity_trial(rng, h_a=h, h_b=const) < 1e-10
    rep = additivity_oracle(42)
    assert rep.passed and rep.samples == 50, rep.to_line()


def test_splitting_examples():
    rng = np.random.default_rng(1)
    _, _, _, q1_pure = splitting_trial(rng, pure=True)
    assert q1_pure < 1e-10
    rep = splitting_oracle(7)
    assert rep.passed, rep.to_line()


def test_report_line_round_trip():
    rep = OracleReport("x", 1.2345678901234567e-11, 1e-10, 5, 9)
    line = rep.to_line()
    assert line == ("name=x seed=9 samples=5 max_abs_error=1.2345678901234567e-11 "
                    "tol=1e-10 passed=true")
    back = OracleReport.from_line(line)
    assert back == rep and back.passed
    assert not OracleReport("y", 2.0, 1.0, 1, 0).passed
    with pytest.raises(ValueError):
        OracleReport.from_line("garbage")


def test_reports_reproducible():
    assert additivity_oracle(5, trials=5) == additivity_oracle(5, trials=5)
    assert mode_oracle(5, samples=5) == mode_oracle(5, samples=5)


def test_mode_level_hard_gate():
    assert chain_additivity_oracle(seed=4).passed


def test_oracle_module_does_not_import_closed_forms():
    tree = ast.parse(Path(oracle.__file__).read_text())
    imported = set()
    for node in ast.walk(tree):
        if isinstance(node, ast.ImportFrom):
            imported.add(node.module)
        elif isinstance(node, ast.Import):
            imported.update(a.name for a in node.names)
    assert "xy" not in imported and "oqgt.xy" not in imported
