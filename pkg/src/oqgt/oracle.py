"""Brute-force references for the closed forms.

Nothing here calls the closed-form XY tensor it is used to check; the
comparisons themselves live in :mod:`oqgt.validate`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import reduce
from typing import NamedTuple

import numpy as np

from ._validation import DEGENERACY_TOL, as_square
from .core import (
    GeometricTensor,
    ReferenceState,
    UnitaryFamily,
    oqgt,
    oqgt_compose_additive,
    spectral_split,
    time_evolution_family,
)

MAX_SPINS = 12

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class PauliString:
    factors: str
    coefficient: float = 1.0

    def __post_init__(self):
        if not self.factors or set(self.factors) - set("IXYZ"):
            raise ValueError(f"invalid Pauli labels {self.factors!r}")

    @property
    def n_sites(self) -> int:
        return len(self.factors)

    @classmethod
    def on_sites(cls, n_sites: int, ops: dict, coefficient: float = 1.0) -> "PauliString":
        labels = ["I"] * n_sites
        for site, label in ops.items():
            labels[site % n_sites] = label
        return cls("".join(labels), coefficient)

    def to_matrix(self) -> np.ndarray:
        return self.coefficient * reduce(np.kron, (PAULI[c] for c in self.factors))


def xy_pauli_strings(n_spins: int, lam: float, gamma: float) -> list:
    """Unrotated periodic XY chain as a list of Pauli strings."""
    terms = []
    for l in range(n_spins):
        nxt = (l + 1) % n_spins
        terms.append(PauliString.on_sites(n_spins, {l: "X", nxt: "X"}, -(1 + gamma) / 2))
        terms.append(PauliString.on_sites(n_spins, {l: "Y", nxt: "Y"}, -(1 - gamma) / 2))
        terms.append(PauliString.on_sites(n_spins, {l: "Z"}, -lam))
    return terms


def _check_spins(n_spins):
    if int(n_spins) != n_spins or n_spins % 2 == 0 or not 3 <= n_spins <= MAX_SPINS:
        raise ValueError(f"n_spins must be odd and in [3, {MAX_SPINS}], got {n_spins}")
    return int(n_spins)


def total_sz(n_spins: int) -> np.ndarray:
    """Diagonal of ``sum_l sigma_z^l`` in the computational basis."""
    bits = (np.arange(2 ** n_spins)[:, None] >> np.arange(n_spins)[::-1]) & 1
    return (n_spins - 2 * bits.sum(axis=1)).astype(float)


def build_xy_hamiltonian(n_spins: int, lam: float, gamma: float, phi: float) -> np.ndarray:
    """Dense ``g^dag(phi) H_XY g(phi)`` with ``g = prod_l exp(i phi sigma_z^l / 2)``."""
    n_spins = _check_spins(n_spins)
    h = sum(term.to_matrix() for term in xy_pauli_strings(n_spins, lam, gamma))
    g = np.exp(0.5j * phi * total_sz(n_spins))
    return g.conj()[:, None] * h * g[None, :]


def kron_xy_hamiltonian(n_spins: int, lam: float, gamma: float, phi: float) -> np.ndarray:
    """Second construction: site operators from pre-rotated Pauli matrices."""
    n_spins = _check_spins(n_spins)
    c, s = math.cos(phi), math.sin(phi)
    x, y, z = PAULI["X"], PAULI["Y"], PAULI["Z"]
    rx = c * x + s * y
    ry = c * y - s * x

    def site(op, l):
        return np.kron(np.kron(np.eye(2 ** l), op), np.eye(2 ** (n_spins - l - 1)))

    dim = 2 ** n_spins
    h = np.zeros((dim, dim), dtype=complex)
    for l in range(n_spins):
        m = (l + 1) % n_spins
        h -= 0.5 * (1 + gamma) * site(rx, l) @ site(rx, m)
        h -= 0.5 * (1 - gamma) * site(ry, l) @ site(ry, m)
        h -= lam * site(z, l)
    return h


class GroundState(NamedTuple):
    vector: np.ndarray
    energy: float
    gap: float
    degenerate: bool


def ground_state(H, degeneracy_tol=DEGENERACY_TOL) -> GroundState:
    """Lowest eigenvector, largest-magnitude entry made real positive."""
    h = as_square(H, "H")
    w, v = np.linalg.eigh(0.5 * (h + h.conj().T))
    vec = v[:, 0]
    piv = vec[np.argmax(np.abs(vec))]
    vec = vec * (abs(piv) / piv)
    gap = float(w[1] - w[0]) if len(w) > 1 else math.inf
    return GroundState(vec, float(w[0]), gap, gap < degeneracy_tol)


def full_chain_family(n_spins: int, t: float) -> UnitaryFamily:
    """``exp(-i t H(lambda, gamma, phi))`` of the dense spin chain.

    ``d H / d phi = -(i/2) [S, H]`` with ``S = sum_l sigma_z^l``; the other two
    derivatives are exact because ``H`` is affine in ``lambda`` and ``gamma``.
    """
    n_spins = _check_spins(n_spins)
    if n_spins > 10:
        raise ValueError("full-chain OQGT is limited to n_spins <= 10")
    sz = total_sz(n_spins)

    def ham(c):
        return build_xy_hamiltonian(n_spins, c[0], c[1], c[2])

    def d_ham(c, mu):
        if mu == 0:
            return -np.diag(sz).astype(complex)
        if mu == 1:
            return ham([0.0, 1.0, c[2]]) - ham([0.0, 0.0, c[2]])
        h = ham(c)
        return -0.5j * (sz[:, None] * h - h * sz[None, :])

    return time_evolution_family(ham, t, param_dim=3, H_derivative=d_ham)


def full_chain_oqgt(n_spins: int, lam: float, gamma: float, phi: float, t: float) -> GeometricTensor:
    """Generic-path tensor of the dense chain, ground state as reference."""
    gs = ground_state(build_xy_hamiltonian(n_spins, lam, gamma, phi))
    if gs.degenerate:
        raise ValueError(f"ground state is degenerate (gap {gs.gap:.3e})")
    fam = full_chain_family(n_spins, t)
    return oqgt(fam, ReferenceState.pure(gs.vector), [lam, gamma, phi])


def full_chain_echo(n_spins: int, lam: float, gamma: float, phi: float, t: float, delta) -> float:
    """Exact echo ``|<G|U^dag(x + delta) U(x)|G>|^2`` of the dense chain."""
    delta = np.asarray(delta, dtype=float)
    h0 = build_xy_hamiltonian(n_spins, lam, gamma, phi)
    h1 = build_xy_hamiltonian(n_spins, lam + delta[0], gamma + delta[1], phi + delta[2])
    gs = ground_state(h0)
    w0, v0 = np.linalg.eigh(h0)
    w1, v1 = np.linalg.eigh(h1)
    a = v0 @ (np.exp(-1j * t * w0) * (v0.conj().T @ gs.vector))
    b = v1 @ (np.exp(-1j * t * w1) * (v1.conj().T @ gs.vector))
    return float(min(1.0, abs(np.vdot(b, a)) ** 2))


# ---------------------------------------------------------------------------
# reports

_LINE = re.compile(
    r"name=(?P<name>\S+) seed=(?P<seed>-?\d+) samples=(?P<samples>\d+) "
    r"max_abs_error=(?P<err>\S+) tol=(?P<tol>\S+) passed=(?P<passed>true|false)$")


@dataclass(frozen=True)
class OracleReport:
    name: str
    max_abs_error: float
    tolerance: float
    samples: int
    seed: int
    hard_gate: bool = True

    @property
    def passed(self) -> bool:
        return bool(self.max_abs_error <= self.tolerance)

    def to_line(self) -> str:
        return (f"name={self.name} seed={self.seed} samples={self.samples} "
                f"max_abs_error={self.max_abs_error!r} tol={self.tolerance!r} "
                f"passed={'true' if self.passed else 'false'}")

    @classmethod
    def from_line(cls, line: str) -> "OracleReport":
        m = _LINE.match(line.strip())
        if m is None:
            raise ValueError(f"not a report line: {line!r}")
        return cls(m["name"], float(m["err"]), float(m["tol"]), int(m["samples"]),
                   int(m["seed"]))


def random_hermitian(rng, n: int) -> np.ndarray:
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (a + a.conj().T)


def _qubit_factor(rng):
    """Random 2-parameter single-qubit Hamiltonian ``H0 + a H1 + b^2 H2``."""
    h0, h1, h2 = (random_hermitian(rng, 2) for _ in range(3))
    return lambda c: h0 + c[0] * h1 + c[1] ** 2 * h2


def _random_mixed(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def additivity_trial(rng, h_a=None, h_b=None, rho_a=None, rho_b=None) -> float:
    """Max deviation between summed factor tensors and the product-family tensor."""
    h_a = h_a or _qubit_factor(rng)
    h_b = h_b or _qubit_factor(rng)
    rho_a = _random_mixed(rng, 2) if rho_a is None else rho_a
    rho_b = _random_mixed(rng, 2) if rho_b is None else rho_b
    t = float(rng.uniform(0.2, 3.0))
    p = rng.uniform(-1, 1, size=2)

    eye = np.eye(2)
    h_ab = lambda c: np.kron(h_a(c), eye) + np.kron(eye, h_b(c))
    q_a = oqgt(time_evolution_family(h_a, t, 2), rho_a, p)
    q_b = oqgt(time_evolution_family(h_b, t, 2), rho_b, p)
    q_ab = oqgt(time_evolution_family(h_ab, t, 2), np.kron(rho_a, rho_b), p)
    return float(np.max(np.abs(oqgt_compose_additive([q_a, q_b]).Q - q_ab.Q)))


def additivity_oracle(seed: int = 42, trials: int = 50, tol: float = 1e-10) -> OracleReport:
    """Two-factor composed tensor vs the 4x4 tensor-product family."""
    rng = np.random.default_rng(seed)
    err = max(additivity_trial(rng) for _ in range(trials))
    return OracleReport("additivity", err, tol, trials, seed)


def _split_family(rng, n=4):
    h0, h1, h2 = (random_hermitian(rng, n) for _ in range(3))
    return lambda c: h0 + c[0] * h1 + np.sin(c[1]) * h2


def splitting_trial(rng, pure: bool = False):
    """Returns ``(sum_err, q1_imag, doubling_rel_err, q1_pure_max)`` for one family."""
    h = _split_family(rng)
    p = rng.uniform(-1, 1, size=2)
    t = float(rng.uniform(0.3, 3.0))
    w, v = np.linalg.eigh(h(p))
    weights = np.zeros(len(w))
    if pure:
        weights[int(rng.integers(len(w)))] = 1.0
    else:
        weights = rng.random(len(w))
        weights /= weights.sum()
    rho = (v * weights) @ v.conj().T
    split = spectral_split(h, rho, p, t)
    q = oqgt(time_evolution_family(h, t, 2), rho, p).Q
    split2 = spectral_split(h, rho, p, 2 * t)
    scale = np.max(np.abs(split.Q1))
    doubling = (float(np.max(np.abs(split2.Q1 - 4 * split.Q1))) / scale) if scale else 0.0
    return (float(np.max(np.abs(split.Q - q))), float(np.max(np.abs(split.Q1.imag))),
            doubling, float(np.max(np.abs(split.Q1))))


def splitting_oracle(seed: int = 7, trials: int = 50, tol: float = 1e-8) -> OracleReport:
    """Worst violation among the four split checks, each scaled to ``tol``.

    Sum consistency and ``Q1(2t) = 4 Q1(t)`` are checked at ``tol``; ``Q1``
    realness and ``Q1 = 0`` for pure eigenstates at ``tol / 100``.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(trials):
        s_err, imag, dbl, _ = splitting_trial(rng)
        _, _, _, q1_pure = splitting_trial(rng, pure=True)
        worst = max(worst, s_err, dbl, 100.0 * imag, 100.0 * q1_pure)
    return OracleReport("splitting", worst, tol, trials, seed)


def hamiltonian_paths_oracle(seed: int = 0, samples: int = 20, tol: float = 1e-14) -> OracleReport:
    """Pauli-string vs pre-rotated Kronecker construction, N in {3, 5}."""
    rng = np.random.default_rng(seed)
    err = 0.0
    for _ in range(samples):
        n = int(rng.choice([3, 5]))
        lam, gamma = rng.uniform(0, 2), rng.uniform(-1.5, 1.5)
        phi = rng.uniform(0, 2 * np.pi)
        a = build_xy_hamiltonian(n, lam, gamma, phi)
        b = kron_xy_hamiltonian(n, lam, gamma, phi)
        err = max(err, float(np.max(np.abs(a - b))))
    return OracleReport("hamiltonian_paths", err, tol, samples, seed)
