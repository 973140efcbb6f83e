import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oqgt import CriticalModeError, GeometricTensor, ReferenceState, UnitaryFamily, oqgt
from oqgt.validate import mode_generic_oqgt, mode_oracle, zero_mode_oracle
from oqgt.xy import (
    XYParams,
    bogoliubov_angle,
    chain_components,
    chain_oqgt,
    dispersion,
    effective_field,
    mode_data,
    mode_ground_state,
    mode_hamiltonian,
    mode_oqgt,
    mode_unitary,
)

params = st.builds(
    XYParams,
    lam=st.floats(0.0, 2.0).filter(lambda x: abs(x - 1) > 0.02),
    gamma=st.floats(0.1, 1.5),
    phi=st.floats(0.0, 2 * math.pi),
    t=st.floats(0.0, 20.0),
    n_spins=st.sampled_from([5, 7, 11, 21, 101]),
)


def test_params_validation():
    for n in (4, 1, 2):
        with pytest.raises(ValueError):
            XYParams(1.0, 1.0, n_spins=n)
    assert XYParams(1.0, 1.0, n_spins=7).n_modes == 3


def test_dispersion_examples():
    p = XYParams(1.0, 1.0, n_spins=5)
    assert dispersion(1, p) == pytest.approx(2.35114100917, abs=1e-10)
    near_quarter = dispersion(250, XYParams(1.0, 1.0, n_spins=1001))
    assert near_quarter == pytest.approx(2 * math.sqrt(2), abs=1e-2)
    assert dispersion(0, p) == 0.0


def test_angle_examples():
    assert bogoliubov_angle(1, XYParams(1.0, 1.0, n_spins=5)) == pytest.approx(0.942477796, abs=1e-9)
    for k in range(1, 6):
        p = XYParams(1.0, 1.0, n_spins=11)
        assert bogoliubov_angle(k, p) == pytest.approx(math.pi / 2 - math.pi * k / 11, abs=1e-12)
        assert bogoliubov_angle(k, XYParams(1.5, 0.0, n_spins=11)) == 0.0


def test_critical_mode_raises():
    p = XYParams(math.cos(2 * math.pi / 5), 0.0, n_spins=5)
    with pytest.raises(CriticalModeError) as info:
        bogoliubov_angle(1, p)
    assert info.value.modes == [1]
    with pytest.raises(CriticalModeError):
        chain_oqgt(p)


@given(params, st.integers(1, 50))
def test_mode_data_invariants(p, k):
    k = min(k, p.n_modes)
    md = mode_data(k, p)
    x = 2 * math.pi * k / p.n_spins
    assert md.Lambda_k == pytest.approx(2 * math.hypot(p.lam - math.cos(x), p.gamma * math.sin(x)),
                                        abs=1e-12)
    r = md.Lambda_k / 2
    assert math.cos(md.theta_k) * r == pytest.approx(p.lam - math.cos(x), abs=1e-12)
    assert math.sin(md.theta_k) * r == pytest.approx(p.gamma * math.sin(x), abs=1e-12)


def test_mode_tensor_examples():
    p = XYParams(1.0, 1.0, 0.4, 0.0, 5)
    assert np.all(mode_oqgt(1, p).Q == 0)
    lam_k = dispersion(1, p)
    q = mode_oqgt(1, p.replace(t=math.pi / 2 / lam_k)).Q
    assert q[0, 0].real == pytest.approx(0.4736, abs=1e-4)
    assert q[0, 0].real == pytest.approx(4 / lam_k ** 2 * math.sin(0.3 * math.pi) ** 2, abs=1e-12)


def test_mode_unitary_examples():
    p = XYParams(1.3, 0.7, 0.5, 0.0, 7)
    assert np.allclose(mode_unitary(2, p), np.eye(2), atol=1e-15)
    diag = XYParams(1.5, 0.0, 0.0, 0.8, 7)
    lam_k = dispersion(1, diag)
    expected = np.diag([np.exp(-1j * lam_k * 0.8), np.exp(1j * lam_k * 0.8)])
    assert np.allclose(mode_unitary(1, diag), expected, atol=1e-14)


@given(params, st.integers(1, 50))
def test_mode_unitary_spectrum(p, k):
    k = min(k, p.n_modes)
    u = mode_unitary(k, p)
    assert np.max(np.abs(u.conj().T @ u - np.eye(2))) < 1e-12
    lam_t = dispersion(k, p) * p.t
    got = np.linalg.eigvals(u)
    for w in (np.exp(-1j * lam_t), np.exp(1j * lam_t)):
        assert np.min(np.abs(got - w)) < 1e-10


def test_ground_state_examples():
    assert np.allclose(mode_ground_state(1, XYParams(1.5, 0.0, n_spins=5)), [0, 1])
    flipped = XYParams(0.0, 0.0, 0.0, 1.0, 5)  # lambda < cos(2 pi / 5): theta = pi
    assert bogoliubov_angle(1, flipped) == pytest.approx(math.pi)
    g = mode_ground_state(1, flipped)
    assert abs(g[0]) == pytest.approx(1.0)
    h = mode_hamiltonian(1, flipped)
    assert np.allclose(h @ g, -dispersion(1, flipped) * g)


@given(params, st.integers(1, 50))
def test_ground_state_energy(p, k):
    k = min(k, p.n_modes)
    g = mode_ground_state(k, p)
    assert np.vdot(g, g).real == pytest.approx(1.0)
    assert np.vdot(g, mode_hamiltonian(k, p) @ g).real == pytest.approx(-dispersion(k, p), abs=1e-12)


def test_fock_block_equivalence():
    # even-parity block {|0>, |k,-k>} carries the mode; odd states are inert
    p = XYParams(0.6, 0.9, 1.1, 2.3, 7)
    k = 2

    def u4(c):
        q = p.replace(lam=c[0], gamma=c[1], phi=c[2])
        out = np.eye(4, dtype=complex)
        out[:2, :2] = mode_unitary(k, q)
        return out

    psi4 = np.zeros(4, dtype=complex)
    psi4[:2] = mode_ground_state(k, p)
    q4 = oqgt(UnitaryFamily(u4, 3, stencil="ridders"), ReferenceState.pure(psi4), p.coords).Q
    q2 = mode_generic_oqgt(k, p).Q
    assert np.max(np.abs(q4 - q2)) < 1e-12


def test_zero_mode_contributes_nothing():
    assert zero_mode_oracle(seed=3, samples=5).passed
    assert np.all(mode_oqgt(0, XYParams(0.4, 1.0, 0.3, 2.0, 5)).Q == 0)


def test_mode_closed_form_vs_generic_small_batch():
    report = mode_oracle(seed=123, samples=25)
    assert report.passed, report.to_line()


@settings(max_examples=50)
@given(params, st.integers(1, 50))
def test_mode_tensor_structure(p, k):
    k = min(k, p.n_modes)
    q = mode_oqgt(k, p)
    assert q.hermiticity_defect() == 0.0
    assert np.linalg.eigvalsh(q.metric).min() >= -1e-10
    assert q.Q[0, 1].imag == 0.0
    assert q.Q[0, 2].real == 0.0 and q.Q[1, 2].real == 0.0
    lam_k = dispersion(k, p)
    assert q.Q[0, 0].real <= 4 / lam_k ** 2 + 1e-15
    assert q.Q[2, 2].real <= 1.0 + 1e-15


@given(params, st.floats(0, 2 * math.pi))
def test_phi_independence(p, phi2):
    k = p.n_modes
    a, b = mode_data(k, p), mode_data(k, p.replace(phi=phi2))
    assert a == b
    assert np.array_equal(mode_oqgt(k, p).Q, mode_oqgt(k, p.replace(phi=phi2)).Q)


@given(params)
def test_gamma_sign_symmetry(p):
    k = 1
    q = mode_oqgt(k, p).Q
    m = mode_oqgt(k, p.replace(gamma=-p.gamma)).Q
    assert bogoliubov_angle(k, p.replace(gamma=-p.gamma)) == pytest.approx(-bogoliubov_angle(k, p))
    for i in range(3):
        assert m[i, i] == pytest.approx(q[i, i], abs=1e-14)
    assert m[0, 1] == pytest.approx(-q[0, 1], abs=1e-14)
    assert m[1, 2] == pytest.approx(-q[1, 2], abs=1e-14)


def test_chain_examples():
    p = XYParams(1.3, 0.8, 0.2, 0.0, 9)
    assert np.all(chain_oqgt(p).Q == 0)
    p = XYParams(0.7, 1.2, 0.4, 3.1, 5)
    summed = mode_oqgt(1, p).Q + mode_oqgt(2, p).Q
    assert np.max(np.abs(chain_oqgt(p).Q - summed)) < 1e-14


def test_chain_peak_near_critical_point():
    g_at = lambda lam: chain_oqgt(XYParams(lam, 1.0, 0.0, 20.0, 1001)).Q[0, 0].real / 1001
    assert g_at(1.0) > g_at(1.5)


def test_chain_components_vectorized_in_t():
    ts = np.linspace(0, 5, 7)
    block = chain_components(0.3, 0.9, 11, ts)
    for t, row in zip(ts, block):
        q = chain_oqgt(XYParams(0.3, 0.9, 0.0, t, 11)).Q
        assert row[0] == q[0, 0].real and row[4] == q[0, 2].imag


def test_effective_field():
    assert effective_field(np.eye(3)).as_array().tolist() == [0, 0, 0]
    q = np.zeros((3, 3), dtype=complex)
    q[0, 2], q[2, 0] = 0.5j, -0.5j
    assert effective_field(q).B_gamma == -1.0
    b = effective_field(chain_oqgt(XYParams(0.5, 1.0, 0.0, 2.0, 11)))
    assert b.B_phi == 0.0
    with pytest.raises(ValueError):
        effective_field(np.eye(2))


def test_double_angle_variant_differs_only_in_phi_entries():
    p = XYParams(0.6, 1.0, 0.0, 1.3, 7)
    a, b = mode_oqgt(2, p).Q, mode_oqgt(2, p, "double-angle").Q
    assert np.array_equal(a[:2, :2], b[:2, :2])
    assert not np.allclose(a[2], b[2])
    assert isinstance(chain_oqgt(p, "double-angle"), GeometricTensor)
