"""Tolerances and input checks shared by every module."""

from __future__ import annotations

import numpy as np

HERMITIAN_TOL = 1e-10
UNITARY_TOL = 1e-10
DENSITY_TOL = 1e-10
PURITY_TOL = 1e-10
STATIONARY_TOL = 1e-10
DEGENERACY_TOL = 1e-10
CRITICAL_GAP_TOL = 1e-14
SPLIT_TOL = 1e-8
DEFAULT_STEP = 1e-4


class DimensionError(ValueError):
    """Operands of an operator product do not share a dimension."""


class NotUnitaryError(ValueError):
    pass


class NotDensityError(ValueError):
    pass


class NonStationaryError(ValueError):
    """Reference state does not commute with the evolution."""


class DegenerateSpectrumError(ValueError):
    """Two eigenvalues are closer than ``DEGENERACY_TOL``."""

    def __init__(self, pair, gap):
        self.pair = tuple(pair)
        self.gap = gap
        super().__init__(
            f"eigenvalues {pair[0]} and {pair[1]} are degenerate (gap {gap:.3e})"
        )


class CriticalModeError(ValueError):
    """A momentum mode has closed its gap; its Bogoliubov angle is undefined."""

    def __init__(self, modes):
        self.modes = list(modes)
        super().__init__(f"gapless momentum mode(s) k={self.modes}")


class FamilyEvaluationError(RuntimeError):
    """A unitary family failed to evaluate at a stencil point."""

    def __init__(self, point, cause):
        self.point = np.asarray(point, dtype=float)
        super().__init__(f"family evaluation failed at {self.point.tolist()}: {cause}")


def as_square(a, name="matrix") -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionError(f"{name} must be a non-empty square matrix, got {a.shape}")
    return a


def as_state(psi, name="psi", tol=1e-10) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).ravel()
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > tol:
        raise ValueError(f"{name} is not normalized (|psi| = {norm!r})")
    return psi


def is_hermitian(a, tol=HERMITIAN_TOL) -> bool:
    a = as_square(a)
    return bool(np.max(np.abs(a - a.conj().T)) <= tol)


def is_unitary(u, tol=UNITARY_TOL) -> bool:
    u = as_square(u)
    eye = np.eye(u.shape[0])
    return bool(np.max(np.abs(u.conj().T @ u - eye)) <= tol)


def is_density(rho, tol=DENSITY_TOL) -> bool:
    rho = as_square(rho)
    if not is_hermitian(rho, tol):
        return False
    if abs(np.trace(rho) - 1.0) > tol:
        return False
    herm = 0.5 * (rho + rho.conj().T)
    return bool(np.linalg.eigvalsh(herm).min() >= -tol)


def check_same_dim(*mats):
    dims = {m.shape[0] for m in mats}
    if len(dims) != 1:
        raise DimensionError(f"dimension mismatch: {sorted(dims)}")
    return dims.pop()


def check_unitary(u, name="U", tol=UNITARY_TOL) -> np.ndarray:
    u = as_square(u, name)
    if not is_unitary(u, tol):
        defect = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
        raise NotUnitaryError(f"{name} is not unitary (defect {defect:.3e})")
    return u
