"""Seeded check batteries that pit closed forms against brute-force paths."""

from __future__ import annotations

import math

import numpy as np

from . import oracle
from .core import (
    ReferenceState,
    UnitaryFamily,
    oqgt,
    state_qgt,
    time_evolution_family,
)
from .oracle import OracleReport
from .presets import cone_overlap_phase, run_phase
from .xy import XYParams, chain_oqgt, mode_ground_state, mode_oqgt, mode_unitary

SUITES = ("all", "core", "xy", "oracle")


def sample_xy_params(rng, n_choices=None) -> tuple:
    """Random ``(k, XYParams)`` away from the critical line ``|lambda - 1| < 0.02``."""
    n_choices = np.arange(5, 102, 2) if n_choices is None else n_choices
    n = int(rng.choice(n_choices))
    lam = rng.uniform(0.0, 2.0)
    while abs(lam - 1.0) < 0.02:
        lam = rng.uniform(0.0, 2.0)
    p = XYParams(lam, rng.uniform(0.1, 1.5), rng.uniform(0.0, 2 * math.pi),
                 rng.uniform(0.0, 20.0), n)
    k = int(rng.integers(1, p.n_modes + 1))
    return k, p


def mode_generic_oqgt(k: int, p: XYParams):
    """Generic-path tensor of ``mode_unitary`` with Ridders differences."""
    fam = UnitaryFamily(
        lambda c: mode_unitary(k, p.replace(lam=c[0], gamma=c[1], phi=c[2])), 3,
        stencil="ridders")
    return oqgt(fam, ReferenceState.pure(mode_ground_state(k, p)), p.coords)


def mode_oracle(seed: int = 0, samples: int = 200, tol: float = 1e-8) -> OracleReport:
    rng = np.random.default_rng(seed)
    err = 0.0
    for _ in range(samples):
        k, p = sample_xy_params(rng)
        err = max(err, float(np.max(np.abs(mode_oqgt(k, p).Q - mode_generic_oqgt(k, p).Q))))
    return OracleReport("mode_closed_form", err, tol, samples, seed)


def zero_mode_oracle(seed: int = 0, samples: int = 20, tol: float = 1e-10) -> OracleReport:
    """The unpaired mode's tensor vanishes for either sigma_z eigenstate."""
    from .xy import zero_mode_unitary

    rng = np.random.default_rng(seed)
    err = 0.0
    for _ in range(samples):
        _, p = sample_xy_params(rng)
        fam = UnitaryFamily(
            lambda c, p=p: zero_mode_unitary(p.replace(lam=c[0], gamma=c[1], phi=c[2])), 3,
            stencil="ridders")
        for psi in ([1.0, 0.0], [0.0, 1.0]):
            q = oqgt(fam, ReferenceState.pure(psi), p.coords).Q
            err = max(err, float(np.max(np.abs(q))))
    return OracleReport("zero_mode", err, tol, samples, seed)


def chain_additivity_oracle(seed: int = 0, tol: float = 1e-10) -> OracleReport:
    """N = 5 chain tensor vs generic tensor of the explicit 4x4 two-mode product."""
    rng = np.random.default_rng(seed)
    _, p = sample_xy_params(rng, n_choices=[5])

    def u(c):
        q = p.replace(lam=c[0], gamma=c[1], phi=c[2])
        return np.kron(mode_unitary(1, q), mode_unitary(2, q))

    fam = UnitaryFamily(u, 3, stencil="ridders")
    psi = np.kron(mode_ground_state(1, p), mode_ground_state(2, p))
    q_direct = oqgt(fam, ReferenceState.pure(psi), p.coords).Q
    err = float(np.max(np.abs(chain_oqgt(p).Q - q_direct)))
    return OracleReport("chain_additivity", err, tol, 1, seed)


def state_operator_oracle(seed: int = 0, samples: int = 20, tol: float = 1e-8) -> OracleReport:
    """Operator tensor with a pure reference vs projector-form state tensor."""
    rng = np.random.default_rng(seed)
    err = 0.0
    for _ in range(samples):
        h0, h1, h2 = (oracle.random_hermitian(rng, 4) for _ in range(3))
        ham = lambda c: h0 + c[0] * h1 + c[1] * c[1] * h2
        fam = time_evolution_family(ham, rng.uniform(0.2, 2.0), 2)
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi /= np.linalg.norm(psi)
        p = rng.uniform(-1, 1, size=2)
        q_state = state_qgt(fam, psi, p)
        q_op = oqgt(fam, ReferenceState.pure(psi), p).Q
        err = max(err, float(np.max(np.abs(q_state - q_op))))
    return OracleReport("state_vs_operator", err, tol, samples, seed)


def gauge_oracle(seed: int = 0, samples: int = 20, tol: float = 1e-8) -> OracleReport:
    """Tensor invariance under ``U -> exp(i chi(p)) U``."""
    rng = np.random.default_rng(seed)
    err = 0.0
    for _ in range(samples):
        h0, h1 = (oracle.random_hermitian(rng, 3) for _ in range(2))
        base = time_evolution_family(lambda c: h0 + c[0] * h1 + c[1] ** 2 * h0, 1.3, 2)
        a, b = rng.normal(size=2)
        chi = lambda c: a * np.sin(c[0]) + b * c[0] * c[1]
        shifted = UnitaryFamily(lambda c: np.exp(1j * chi(c)) * base(c), 2, stencil="ridders")
        plain = UnitaryFamily(base.func, 2, stencil="ridders")
        rho = oracle._random_mixed(rng, 3)
        p = rng.uniform(-1, 1, size=2)
        err = max(err, float(np.max(np.abs(oqgt(shifted, rho, p).Q - oqgt(plain, rho, p).Q))))
    return OracleReport("gauge_invariance", err, tol, samples, seed)


def cross_path_oracle(seed: int = 0, samples: int = 20, tol: float = 1e-6) -> OracleReport:
    """Central differences at h = 1e-4 vs the spectral derivative."""
    rng = np.random.default_rng(seed)
    err = 0.0
    for _ in range(samples):
        h0, h1 = (oracle.random_hermitian(rng, 3) for _ in range(2))
        ham = lambda c: 0.3 * h0 + c[0] * 0.3 * h1 + np.cos(c[1]) * 0.3 * h0
        fam = time_evolution_family(ham, 1.0, 2)
        fd = fam.with_finite_differences(1e-4)
        rho = oracle._random_mixed(rng, 3)
        p = rng.uniform(-1, 1, size=2)
        err = max(err, float(np.max(np.abs(oqgt(fam, rho, p).Q - oqgt(fd, rho, p).Q))))
    return OracleReport("fd_vs_spectral", err, tol, samples, seed)


def cone_phase_oracle(seed: int = 0, tol: float = 1e-4) -> OracleReport:
    """Cone loop at theta = pi/3: line integral vs pi (1 - cos theta), overlap
    product, and the Stokes residual on a 200 x 200 mesh."""
    theta = math.pi / 3
    res = run_phase("cone", theta=theta, n_points=2000, mesh=(200, 200))
    overlap = cone_overlap_phase(theta, 2000)
    err = max(abs(res["line"] - math.pi * (1 - math.cos(theta))),
              abs(res["line"] - overlap), res["stokes_residual"])
    return OracleReport("cone_phase", err, tol, 1, seed)


def full_chain_finding(seed: int = 0, n_spins: int = 5, tol: float = 1e-6) -> OracleReport:
    """Dense-chain generic tensor vs momentum-formula tensor (soft finding)."""
    lam, gamma, phi, t = 2.0, 1.0, 0.3, 1.0
    q_full = oracle.full_chain_oqgt(n_spins, lam, gamma, phi, t).Q
    q_mom = chain_oqgt(XYParams(lam, gamma, phi, t, n_spins)).Q
    err = float(np.max(np.abs(q_full - q_mom)))
    return OracleReport("full_chain_finding", err, tol, 1, seed, hard_gate=False)


def run_suite(suite: str, seed: int = 42) -> list:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")
    reports = []
    if suite in ("all", "core"):
        reports += [state_operator_oracle(seed), gauge_oracle(seed), cross_path_oracle(seed),
                    cone_phase_oracle(seed)]
    if suite in ("all", "xy"):
        reports += [mode_oracle(seed), zero_mode_oracle(seed), chain_additivity_oracle(seed)]
    if suite in ("all", "oracle"):
        reports += [oracle.hamiltonian_paths_oracle(seed), oracle.additivity_oracle(seed),
                    oracle.splitting_oracle(seed)]
    if suite == "all":
        reports.append(full_chain_finding(seed))
    return reports
