"""Closed-form geometric tensor of the z-rotated XY chain.

After the fermionic mapping, the chain with ``N = 2M + 1`` spins splits into
independent momentum pairs ``(k, -k)``. On the even-parity subspace of a pair
the mode Hamiltonian is ``S_k^dag (Lambda_k sigma_z) S_k`` with
``S_k = R_x(theta_k) R_z(phi)`` and ``R_a(x) = exp(-i x sigma_a / 2)``. The
reference state is the mode ground state ``S_k^dag |down>``.

Each mode tensor has rank one: ``Q_k = sin^2(Lambda_k t) c c^dag`` with

    c = (-2 sin(theta) / Lambda, 2 cos(theta) sin(x) / Lambda, -i sin(theta))

over the axes ``(lambda, gamma, phi)`` and ``x = 2 pi k / N``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._validation import CRITICAL_GAP_TOL, CriticalModeError
from .core import GeometricTensor

__all__ = [
    "AXES",
    "PHI_COUPLINGS",
    "XYParams",
    "ModeData",
    "EffectiveField",
    "dispersion",
    "bogoliubov_angle",
    "mode_data",
    "mode_hamiltonian",
    "mode_unitary",
    "mode_ground_state",
    "mode_oqgt",
    "zero_mode_unitary",
    "chain_oqgt",
    "chain_components",
    "chain_echo",
    "effective_field",
]

AXES = ("lambda", "gamma", "phi")

# "exact" couples phi through sin(theta), the value that matches the generator
# covariance of mode_unitary. "double-angle" uses sin(2 theta) in the three
# phi entries instead; kept so published-style surfaces can be regenerated.
PHI_COUPLINGS = ("exact", "double-angle")

_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)
_DOWN = np.array([0, 1], dtype=complex)


@dataclass(frozen=True)
class XYParams:
    lam: float
    gamma: float
    phi: float = 0.0
    t: float = 0.0
    n_spins: int = 5

    def __post_init__(self):
        n = self.n_spins
        if int(n) != n or n < 3 or n % 2 == 0:
            raise ValueError(f"n_spins must be an odd integer >= 3, got {n}")
        object.__setattr__(self, "n_spins", int(n))
        for name in ("lam", "gamma", "phi", "t"):
            object.__setattr__(self, name, float(getattr(self, name)))

    @property
    def n_modes(self) -> int:
        """``M`` for ``N = 2M + 1``."""
        return (self.n_spins - 1) // 2

    @property
    def coords(self) -> np.ndarray:
        return np.array([self.lam, self.gamma, self.phi])

    def replace(self, **changes) -> "XYParams":
        fields = dict(lam=self.lam, gamma=self.gamma, phi=self.phi, t=self.t,
                      n_spins=self.n_spins)
        fields.update(changes)
        return XYParams(**fields)


@dataclass(frozen=True)
class ModeData:
    k: int
    Lambda_k: float
    theta_k: float


@dataclass(frozen=True)
class EffectiveField:
    B_lambda: float
    B_gamma: float
    B_phi: float

    def as_array(self) -> np.ndarray:
        return np.array([self.B_lambda, self.B_gamma, self.B_phi])


def _check_k(k, p: XYParams) -> int:
    if int(k) != k or not 0 <= k <= p.n_modes:
        raise ValueError(f"mode index k={k} outside [0, {p.n_modes}] for N={p.n_spins}")
    return int(k)


def _components(k, p: XYParams):
    x = 2.0 * math.pi * k / p.n_spins
    return p.lam - math.cos(x), p.gamma * math.sin(x)


def dispersion(k: int, p: XYParams) -> float:
    """Mode energy ``Lambda_k = 2 sqrt((lambda - cos x)^2 + gamma^2 sin^2 x)``."""
    a, b = _components(_check_k(k, p), p)
    return 2.0 * math.hypot(a, b)


def bogoliubov_angle(k: int, p: XYParams) -> float:
    """Principal-branch Bogoliubov angle in ``(-pi, pi]``."""
    k = _check_k(k, p)
    a, b = _components(k, p)
    if 2.0 * math.hypot(a, b) <= CRITICAL_GAP_TOL:
        raise CriticalModeError([k])
    return math.atan2(b, a)


def mode_data(k: int, p: XYParams) -> ModeData:
    return ModeData(int(k), dispersion(k, p), bogoliubov_angle(k, p))


def _rot(angle, pauli):
    return math.cos(angle / 2) * np.eye(2) - 1j * math.sin(angle / 2) * pauli


def _frame(theta, phi):
    return _rot(theta, _SX) @ _rot(phi, _SZ)


def mode_hamiltonian(k: int, p: XYParams) -> np.ndarray:
    """``S_k^dag (Lambda_k sigma_z) S_k`` on the pair's even-parity subspace."""
    md = mode_data(k, p)
    s = _frame(md.theta_k, p.phi)
    return s.conj().T @ (md.Lambda_k * _SZ) @ s


def mode_unitary(k: int, p: XYParams) -> np.ndarray:
    """``S_k^dag exp(-i t Lambda_k sigma_z) S_k`` (2x2)."""
    md = mode_data(k, p)
    if p.t == 0:
        # exact identity, so the generic tensor vanishes exactly at t = 0
        return np.eye(2, dtype=complex)
    s = _frame(md.theta_k, p.phi)
    ud = np.diag([np.exp(-1j * md.Lambda_k * p.t), np.exp(1j * md.Lambda_k * p.t)])
    return s.conj().T @ ud @ s


def mode_ground_state(k: int, p: XYParams, phi_in_frame: bool = True) -> np.ndarray:
    """Ground state ``S_k^dag |down>`` of the mode Hamiltonian, energy ``-Lambda_k``.

    ``phi_in_frame=False`` builds the frame at ``phi = 0``. Because ``R_z``
    acts after ``R_x^dag`` that vector is a different state whenever
    ``phi != 0`` and is not stationary under :func:`mode_unitary`.
    """
    md = mode_data(k, p)
    s = _frame(md.theta_k, p.phi if phi_in_frame else 0.0)
    return s.conj().T @ _DOWN


def zero_mode_unitary(p: XYParams) -> np.ndarray:
    """Unpaired ``k = 0`` mode: ``R_z(phi)^dag exp(-i t (lambda - 1) sigma_z) R_z(phi)``."""
    rz = _rot(p.phi, _SZ)
    ud = np.diag([np.exp(-1j * (p.lam - 1.0) * p.t), np.exp(1j * (p.lam - 1.0) * p.t)])
    return rz.conj().T @ ud @ rz


def _coupling_vectors(lam, gamma, phi_coupling, ks, n_spins, t):
    """Per-mode envelope ``sin^2(Lambda t)`` and coupling vectors ``c``.

    ``t`` may be an array; the envelope then has shape ``(len(t), len(ks))``.
    """
    if phi_coupling not in PHI_COUPLINGS:
        raise ValueError(f"phi_coupling must be one of {PHI_COUPLINGS}")
    x = 2.0 * np.pi * ks / n_spins
    sx = np.sin(x)
    a = lam - np.cos(x)
    b = gamma * sx
    big_lambda = 2.0 * np.hypot(a, b)
    critical = ks[big_lambda <= CRITICAL_GAP_TOL]
    if critical.size:
        raise CriticalModeError(critical.tolist())
    theta = np.arctan2(b, a)
    sin_t = np.sin(theta)
    cos_t = np.cos(theta)
    c_lam = -2.0 * sin_t / big_lambda
    c_gam = 2.0 * cos_t * sx / big_lambda
    c_phi = sin_t if phi_coupling == "exact" else np.sin(2.0 * theta)
    envelope = np.sin(np.multiply.outer(np.asarray(t, dtype=float), big_lambda)) ** 2
    return envelope, c_lam, c_gam, c_phi


def _mode_matrix(env, c_lam, c_gam, c_phi):
    # c = (c_lam, c_gam, -i c_phi)
    q = np.empty((3, 3), dtype=complex)
    q[0, 0] = env * c_lam * c_lam
    q[1, 1] = env * c_gam * c_gam
    q[2, 2] = env * c_phi * c_phi
    q[0, 1] = q[1, 0] = env * c_lam * c_gam
    q[0, 2] = 1j * env * c_lam * c_phi
    q[1, 2] = 1j * env * c_gam * c_phi
    q[2, 0] = np.conj(q[0, 2])
    q[2, 1] = np.conj(q[1, 2])
    return q


def mode_oqgt(k: int, p: XYParams, phi_coupling: str = "exact") -> GeometricTensor:
    """Closed-form 3x3 tensor of mode ``k`` over ``(lambda, gamma, phi)``.

    Entries, with ``e = sin^2(Lambda t)`` and ``x = 2 pi k / N``::

        Q_ll = 4 e sin^2(theta) / Lambda^2
        Q_gg = 4 e cos^2(theta) sin^2(x) / Lambda^2
        Q_pp = e sin^2(theta)
        Q_lg = -4 e sin(theta) cos(theta) sin(x) / Lambda^2
        Q_lp = -2i e sin^2(theta) / Lambda
        Q_gp = 2i e sin(theta) cos(theta) sin(x) / Lambda

    ``k = 0`` returns the zero tensor.
    """
    k = _check_k(k, p)
    if k == 0:
        return GeometricTensor(np.zeros((3, 3), dtype=complex), p.coords)
    env, c_lam, c_gam, c_phi = _coupling_vectors(
        p.lam, p.gamma, phi_coupling, np.array([k]), p.n_spins, p.t)
    q = _mode_matrix(env[0], c_lam[0], c_gam[0], c_phi[0])
    return GeometricTensor(q, p.coords)


_ENTRIES = ((0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2))


def chain_components(lam, gamma, n_spins, ts, phi_coupling="exact") -> np.ndarray:
    """Whole-chain tensor entries for every time in ``ts``.

    Returns an array of shape ``(len(ts), 6)`` holding
    ``(Q_ll, Q_gg, Q_pp, Re Q_lg, Im Q_lp, Im Q_gp)``; the remaining parts of
    the upper triangle vanish identically. The phi angle does not enter.
    Mode sums run over ``k = 1..M`` in ascending order and are rounded once
    with :func:`math.fsum`.
    """
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    ks = np.arange(1, (n_spins - 1) // 2 + 1)
    env, c_lam, c_gam, c_phi = _coupling_vectors(lam, gamma, phi_coupling, ks, n_spins, ts)
    weights = (c_lam * c_lam, c_gam * c_gam, c_phi * c_phi,
               c_lam * c_gam, c_lam * c_phi, c_gam * c_phi)
    out = np.empty((len(ts), 6))
    for j, w in enumerate(weights):
        terms = env * w
        for i in range(len(ts)):
            out[i, j] = math.fsum(terms[i])
    return out


def _assemble(row) -> np.ndarray:
    ll, gg, pp, lg, lp, gp = row
    q = np.array([[ll, lg, 1j * lp],
                  [lg, gg, 1j * gp],
                  [-1j * lp, -1j * gp, pp]], dtype=complex)
    return q


def chain_oqgt(p: XYParams, phi_coupling: str = "exact") -> GeometricTensor:
    """Whole-chain tensor, the sum of the mode tensors for ``k = 1..M``.

    The unpaired ``k = 0`` mode contributes nothing: its Hamiltonian commutes
    with the z rotation and the reference state is its eigenstate.
    """
    row = chain_components(p.lam, p.gamma, p.n_spins, [p.t], phi_coupling)[0]
    return GeometricTensor(_assemble(row), p.coords)


def chain_echo(p: XYParams, delta) -> float:
    """Echo ``|<G|U^dag(x + delta) U(x)|G>|^2`` evaluated mode by mode.

    Exact within the momentum-pair model (no expansion in ``delta``).
    """
    delta = np.asarray(delta, dtype=float)
    q = p.replace(lam=p.lam + delta[0], gamma=p.gamma + delta[1], phi=p.phi + delta[2])
    log_l = 0.0
    for k in range(1, p.n_modes + 1):
        g = mode_ground_state(k, p)
        amp = np.vdot(mode_unitary(k, q) @ g, mode_unitary(k, p) @ g)
        log_l += math.log(abs(amp) ** 2)
    # k = 0: the reference is a sigma_z eigenstate of a sigma_z evolution, so
    # its overlap is a pure phase for any delta.
    return math.exp(log_l)


def effective_field(Q) -> EffectiveField:
    """Vector dual of the curvature: ``(2 Im Q_gp, -2 Im Q_lp, 0)``."""
    q = Q.Q if isinstance(Q, GeometricTensor) else np.asarray(Q, dtype=complex)
    if q.shape != (3, 3):
        raise ValueError("effective field needs a 3x3 tensor over (lambda, gamma, phi)")
    return EffectiveField(2.0 * q[1, 2].imag, -2.0 * q[0, 2].imag, 0.0)
