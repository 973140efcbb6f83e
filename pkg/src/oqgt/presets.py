"""Ready-made families for geometric-phase runs."""

from __future__ import annotations

import math

import numpy as np

from .core import (
    PhaseResult,
    ReferenceState,
    UnitaryFamily,
    geometric_phase_line,
    geometric_phase_surface,
    rectangle_loop,
)
from .xy import XYParams, mode_ground_state, mode_unitary

_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def _rot(angle, pauli):
    return math.cos(angle / 2) * np.eye(2) - 1j * math.sin(angle / 2) * pauli


def spin_cone_family() -> UnitaryFamily:
    """``U(theta, phi) = R_z(phi) R_x(theta)`` with analytic derivatives."""

    def u(c):
        return _rot(c[1], _SZ) @ _rot(c[0], _SX)

    def du(c, mu):
        if mu == 0:
            return _rot(c[1], _SZ) @ (-0.5j * _SX) @ _rot(c[0], _SX)
        return -0.5j * _SZ @ _rot(c[1], _SZ) @ _rot(c[0], _SX)

    return UnitaryFamily(u, 2, derivative=du)


def spin_cone_reference() -> ReferenceState:
    return ReferenceState.pure([1.0, 0.0])


def xy_mode_family(k: int, base: XYParams) -> UnitaryFamily:
    """Mode ``k`` evolution as a function of ``(lambda, phi)`` around ``base``."""

    def u(c):
        return mode_unitary(k, base.replace(lam=c[0], phi=c[1]))

    return UnitaryFamily(u, 2, stencil="ridders")


def xy_mode_reference(k: int, base: XYParams) -> ReferenceState:
    return ReferenceState.pure(mode_ground_state(k, base))


def cone_loop(theta: float, n_points: int, reverse: bool = False) -> np.ndarray:
    """Closed loop at fixed ``theta`` sweeping ``phi`` over ``[0, 2 pi]``."""
    phi = np.linspace(0.0, 2 * math.pi, n_points)
    pts = np.column_stack([np.full_like(phi, theta), phi])
    if reverse:
        pts = pts[::-1].copy()
    return pts


def cone_overlap_phase(theta: float, n_points: int) -> float:
    """``-arg prod <psi_i|psi_{i+1}>`` along the cone path, states ``U|0>``.

    Independent of the connection: uses only state overlaps at the path
    points, including the end point ``U(theta, 2 pi)|0>``.
    """
    fam = spin_cone_family()
    psi0 = np.array([1.0, 0.0], dtype=complex)
    states = [fam([theta, phi]) @ psi0 for phi in np.linspace(0, 2 * math.pi, n_points)]
    total = 0.0
    for a, b in zip(states[:-1], states[1:]):
        ov = np.vdot(a, b)
        total += math.atan2(ov.imag, ov.real)
    return -total


def run_phase(preset: str, *, theta=math.pi / 3, n_points=2000, mesh=(200, 200),
              reverse=False, k=1, base: XYParams | None = None, lam_range=None,
              shape="circle", a_range=None):
    """Line phase, surface phase and their gap for a preset.

    With ``shape="rectangle"`` the reported line phase is the boundary integral
    of the Stokes rectangle itself, whose first-axis extent is ``a_range``.

    ``"cone"`` integrates the loop at ``theta`` and, for the Stokes check, the
    rectangle ``[0, theta] x [0, 2 pi]`` in ``(theta, phi)``. ``"xy-mode"``
    uses mode ``k`` of ``base`` with the rectangle ``lam_range x [0, 2 pi]`` in
    ``(lambda, phi)`` and a reference state frozen at ``base``.
    """
    na, nb = mesh
    if preset == "cone":
        fam, ref = spin_cone_family(), spin_cone_reference()
        loop = cone_loop(theta, n_points, reverse)
        line = geometric_phase_line(fam, ref, loop, periods=(None, 2 * math.pi))
        a_range, center = a_range or (0.0, theta), np.zeros(2)
    elif preset == "xy-mode":
        base = base or XYParams(1.5, 1.0, 0.0, 1.0, 5)
        fam, ref = xy_mode_family(k, base), xy_mode_reference(k, base)
        phi = np.linspace(0.0, 2 * math.pi, n_points)
        loop = np.column_stack([np.full_like(phi, base.lam), phi])
        if reverse:
            loop = loop[::-1].copy()
        line = geometric_phase_line(fam, ref, loop, periods=(None, 2 * math.pi))
        a_range = a_range or lam_range or (base.lam - 0.1, base.lam)
        center = np.array([base.lam, 0.0])
    else:
        raise ValueError(f"unknown preset {preset!r}")
    if shape not in ("circle", "rectangle"):
        raise ValueError(f"unknown loop shape {shape!r}")
    b_range = (0.0, 2 * math.pi)
    boundary = rectangle_loop(center, 0, 1, a_range, b_range, na, nb)
    if reverse:
        boundary = boundary[::-1].copy()
    stokes_line = geometric_phase_line(fam, ref, boundary).raw
    surface = geometric_phase_surface(fam, ref, center, 0, 1, a_range, b_range, na, nb)
    if reverse:
        surface = -surface
    if shape == "rectangle":
        line = PhaseResult(float(np.mod(stokes_line, 2 * math.pi)), stokes_line)
    return {
        "line": line.raw,
        "line_mod_2pi": line.value,
        "boundary_line": stokes_line,
        "surface": surface,
        "stokes_residual": abs(stokes_line - surface),
    }
