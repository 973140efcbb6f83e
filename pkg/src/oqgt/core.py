"""Quantum geometric tensor of parameterized unitary families.

Every quantity here is taken with respect to a reference density state
``rho`` through the operator inner product ``<X, Y>_rho = Tr(X^dag Y rho)``.
The generator of a displacement along axis ``mu`` is ``A_mu = i U^dag d_mu U``
and the tensor is the covariance

    Q_mu_nu = <A_mu A_nu>_rho - <A_mu>_rho <A_nu>_rho

whose real part is the metric and whose imaginary part is the curvature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from ._fd import central, ridders
from ._validation import (
    DEFAULT_STEP,
    DEGENERACY_TOL,
    DENSITY_TOL,
    HERMITIAN_TOL,
    PURITY_TOL,
    STATIONARY_TOL,
    UNITARY_TOL,
    DegenerateSpectrumError,
    DimensionError,
    FamilyEvaluationError,
    NonStationaryError,
    NotDensityError,
    as_square,
    as_state,
    check_same_dim,
    check_unitary,
    is_density,
    is_hermitian,
    is_unitary,
)

__all__ = [
    "ReferenceState",
    "UnitaryFamily",
    "GeometricTensor",
    "SpectralSplit",
    "PhaseResult",
    "operator_inner_product",
    "operator_fidelity",
    "generators",
    "oqgt",
    "state_qgt",
    "state_qgt_check",
    "metric",
    "curvature",
    "berry_connection",
    "geometric_phase_line",
    "geometric_phase_surface",
    "rectangle_loop",
    "loschmidt_echo_exact",
    "loschmidt_echo_first_order",
    "oqgt_compose_additive",
    "spectral_split",
    "time_evolution_family",
    "gauge_fixed_eigh",
]


@dataclass(frozen=True, eq=False)
class ReferenceState:
    """Density matrix used as the reference of the operator inner product."""

    rho: np.ndarray

    def __post_init__(self):
        rho = as_square(self.rho, "rho").copy()
        if not is_density(rho, DENSITY_TOL):
            raise NotDensityError("rho is not a density matrix within 1e-10")
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    @classmethod
    def pure(cls, psi) -> "ReferenceState":
        psi = as_state(psi)
        return cls(np.outer(psi, psi.conj()))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "ReferenceState":
        return cls(np.eye(dim, dtype=complex) / dim)

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    @property
    def purity(self) -> float:
        return float(np.real(np.trace(self.rho @ self.rho)))

    @property
    def is_pure(self) -> bool:
        return abs(self.purity - 1.0) <= PURITY_TOL

    def is_stationary(self, u, tol=STATIONARY_TOL) -> bool:
        u = as_square(u)
        return bool(np.max(np.abs(self.rho @ u - u @ self.rho)) <= tol)

    def pure_vector(self) -> np.ndarray:
        """Return ``psi`` with ``rho = |psi><psi|``; only valid when pure."""
        w, v = np.linalg.eigh(self.rho)
        return v[:, -1]

    def expect(self, op) -> complex:
        return complex(np.trace(self.rho @ op))


def _as_reference(rho) -> ReferenceState:
    return rho if isinstance(rho, ReferenceState) else ReferenceState(rho)


class UnitaryFamily:
    """A map from a parameter vector to a unitary matrix.

    Parameters
    ----------
    func : callable
        ``func(coords) -> ndarray`` returning a unitary matrix.
    param_dim : int
        Number of parameters ``d``.
    derivative : callable, optional
        ``derivative(coords, mu) -> ndarray`` giving ``d_mu U`` analytically.
        When omitted, derivatives use a central difference with ``step``.
    step : float or sequence of float
        Finite-difference step per axis.
    stencil : {"central", "ridders"}
        ``"central"`` is the plain symmetric difference with ``step``;
        ``"ridders"`` extrapolates central differences to zero step starting
        from ``ridders_step`` and is the choice for oracle-grade accuracy.
    check_unitarity : bool
        Verify every evaluated matrix is unitary within 1e-10.
    """

    def __init__(self, func: Callable, param_dim: int, derivative: Callable | None = None,
                 step=DEFAULT_STEP, check_unitarity: bool = True, stencil: str = "central",
                 ridders_step: float = 1e-2):
        if int(param_dim) < 1:
            raise ValueError("param_dim must be positive")
        self.func = func
        self.param_dim = int(param_dim)
        self.analytic_derivative = derivative
        steps = np.broadcast_to(np.asarray(step, dtype=float), (self.param_dim,)).copy()
        if np.any(steps <= 0):
            raise ValueError("finite-difference steps must be positive")
        self.step = steps
        if stencil not in ("central", "ridders"):
            raise ValueError(f"unknown stencil {stencil!r}")
        self.stencil = stencil
        self.ridders_step = float(ridders_step)
        self.check_unitarity = check_unitarity

    @property
    def derivative_mode(self) -> str:
        return "analytic" if self.analytic_derivative is not None else "finite_difference"

    def _coords(self, coords) -> np.ndarray:
        coords = np.atleast_1d(np.asarray(coords, dtype=float))
        if coords.shape != (self.param_dim,):
            raise DimensionError(
                f"expected {self.param_dim} coordinates, got shape {coords.shape}")
        return coords

    def __call__(self, coords) -> np.ndarray:
        coords = self._coords(coords)
        try:
            u = as_square(self.func(coords), "U")
        except Exception as exc:
            raise FamilyEvaluationError(coords, exc) from exc
        if self.check_unitarity and not is_unitary(u, UNITARY_TOL):
            raise FamilyEvaluationError(coords, "result is not unitary within 1e-10")
        return u

    def derivative(self, coords, mu: int) -> np.ndarray:
        coords = self._coords(coords)
        if self.analytic_derivative is not None:
            return as_square(self.analytic_derivative(coords, mu), "dU")
        e = np.zeros(self.param_dim)
        e[mu] = 1.0

        def along(x):
            return self(coords + x * e)

        if self.stencil == "ridders":
            return ridders(along, 0.0, self.ridders_step)[0]
        return central(along, 0.0, self.step[mu])

    def with_finite_differences(self, step=None, stencil: str = "central") -> "UnitaryFamily":
        return UnitaryFamily(self.func, self.param_dim, None,
                             self.step if step is None else step, self.check_unitarity,
                             stencil, self.ridders_step)


@dataclass(frozen=True, eq=False)
class GeometricTensor:
    """Hermitian ``d x d`` tensor evaluated at ``point``."""

    Q: np.ndarray
    point: np.ndarray = field(default=None)

    def __post_init__(self):
        q = np.array(self.Q, dtype=complex)
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise DimensionError(f"Q must be square, got {q.shape}")
        q.setflags(write=False)
        object.__setattr__(self, "Q", q)
        if self.point is not None:
            p = np.array(self.point, dtype=float)
            p.setflags(write=False)
            object.__setattr__(self, "point", p)

    @property
    def dim(self) -> int:
        return self.Q.shape[0]

    @property
    def metric(self) -> np.ndarray:
        return metric(self)

    @property
    def curvature(self) -> np.ndarray:
        return curvature(self)

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.Q - self.Q.conj().T)))


class PhaseResult(NamedTuple):
    value: float  # reduced to [0, 2*pi)
    raw: float


@dataclass(frozen=True, eq=False)
class SpectralSplit:
    """Eigenvalue-driven and eigenvector-driven parts of the tensor."""

    Q1: np.ndarray
    Q2: np.ndarray
    alpha: np.ndarray
    beta_terms: list
    eigenvalues: np.ndarray
    t: float

    @property
    def Q(self) -> np.ndarray:
        return self.Q1 + self.Q2


def operator_inner_product(X, Y, rho) -> complex:
    """``Tr(X^dag Y rho)``."""
    rho = _as_reference(rho)
    X = as_square(X, "X")
    Y = as_square(Y, "Y")
    check_same_dim(X, Y, rho.rho)
    # Tr(M rho) = sum_ij M_ij rho_ji
    return complex(np.sum((X.conj().T @ Y) * rho.rho.T))


def operator_fidelity(U1, U2, rho) -> float:
    """``|Tr(U1^dag U2 rho)|``."""
    U1 = check_unitary(U1, "U1")
    U2 = check_unitary(U2, "U2")
    return abs(operator_inner_product(U1, U2, rho))


def generators(family: UnitaryFamily, p, return_defect: bool = False):
    """Hermitian generators ``A_mu = i U^dag d_mu U`` at ``p``.

    Finite-difference generators are Hermitized as ``(A + A^dag) / 2``; the
    largest anti-Hermitian residue removed this way is returned as the second
    value when ``return_defect`` is set.
    """
    u = family(p)
    udag = u.conj().T
    gens = []
    defect = 0.0
    for mu in range(family.param_dim):
        a = 1j * (udag @ family.derivative(p, mu))
        defect = max(defect, float(np.max(np.abs(a - a.conj().T))))
        gens.append(0.5 * (a + a.conj().T))
    if return_defect:
        return gens, defect
    return gens


def _covariance(gens: Sequence[np.ndarray], ref: ReferenceState) -> np.ndarray:
    d = len(gens)
    if ref.is_pure:
        psi = ref.pure_vector()
        w = np.array([a @ psi for a in gens])
        second = w.conj() @ w.T
        first = np.real(w.conj() @ psi)
    else:
        rho_t = ref.rho.T
        first = np.array([np.real(np.sum(a * rho_t)) for a in gens])
        second = np.empty((d, d), dtype=complex)
        for m in range(d):
            b = ref.rho @ gens[m]
            for n in range(d):
                second[m, n] = np.sum(b * gens[n].T)
    return second - np.outer(first, first)


def oqgt(family: UnitaryFamily, rho, p) -> GeometricTensor:
    """Operator quantum geometric tensor of ``family`` at ``p``."""
    ref = _as_reference(rho)
    gens = generators(family, p)
    check_same_dim(gens[0], ref.rho)
    return GeometricTensor(_covariance(gens, ref), p)


def state_qgt(family: UnitaryFamily, psi0, p, step=None) -> np.ndarray:
    """Projector-form QGT ``<d_mu psi|(1 - |psi><psi|)|d_nu psi>`` of ``U(p)|psi0>``."""
    psi0 = as_state(psi0, "psi0")
    p = np.asarray(p, dtype=float)
    psi = family(p) @ psi0
    d = family.param_dim
    hs = family.step if step is None else np.broadcast_to(step, (d,))
    dpsi = []
    for mu in range(d):
        if family.analytic_derivative is not None and step is None:
            dpsi.append(family.derivative(p, mu) @ psi0)
        else:
            e = np.zeros(d)
            e[mu] = hs[mu]
            dpsi.append((family(p + e) @ psi0 - family(p - e) @ psi0) / (2 * hs[mu]))
    dpsi = np.array(dpsi)
    proj = np.eye(len(psi)) - np.outer(psi, psi.conj())
    return dpsi.conj() @ proj @ dpsi.T


def state_qgt_check(family: UnitaryFamily, psi0, p, tol=1e-8) -> np.ndarray:
    """State QGT of the orbit ``U(p)|psi0>``, verified against :func:`oqgt`.

    Raises ``AssertionError`` if the two routes differ by more than ``tol``.
    """
    q_state = state_qgt(family, psi0, p)
    q_op = oqgt(family, ReferenceState.pure(psi0), p).Q
    err = float(np.max(np.abs(q_state - q_op)))
    if err > tol:
        raise AssertionError(f"state and operator QGT differ by {err:.3e} > {tol:.1e}")
    return q_state


def _tensor_array(Q) -> np.ndarray:
    q = Q.Q if isinstance(Q, GeometricTensor) else np.asarray(Q, dtype=complex)
    if not is_hermitian(q, HERMITIAN_TOL):
        raise ValueError("tensor is not Hermitian within 1e-10")
    return q


def metric(Q) -> np.ndarray:
    q = _tensor_array(Q)
    g = np.real(q)
    return 0.5 * (g + g.T)


def curvature(Q) -> np.ndarray:
    """Component array ``Im Q_mu_nu`` (antisymmetric).

    The 2-form summed over all index pairs equals
    ``sum_{mu<nu} 2 Im Q_mu_nu dl^mu ^ dl^nu``.
    """
    q = _tensor_array(Q)
    s = np.imag(q)
    return 0.5 * (s - s.T)


def berry_connection(family: UnitaryFamily, rho, p) -> np.ndarray:
    """Connection components ``beta_mu = -Tr(rho A_mu)``.

    Only meaningful for a reference state that does not depend on the
    parameters; that is the caller's responsibility.
    """
    ref = _as_reference(rho)
    gens = generators(family, p)
    return np.array([-ref.expect(a).real for a in gens])


def _closed_path(points, periods=None) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[0] < 2:
        raise ValueError("a loop needs at least two points")
    gap = pts[-1] - pts[0]
    if periods is not None:
        for ax, period in enumerate(periods):
            if period:
                gap[ax] = math.remainder(gap[ax], period)
    if np.any(gap != 0.0):
        raise ValueError("loop is not closed: first and last points differ")
    return pts


def geometric_phase_line(family: UnitaryFamily, rho, loop, periods=None) -> PhaseResult:
    """``-oint beta`` along a closed polyline, trapezoid rule per segment.

    ``periods`` lists a period per axis (``None`` or 0 for non-periodic axes);
    end points that differ by whole periods then count as closed.
    """
    pts = _closed_path(loop, periods)
    if pts.shape[1] != family.param_dim:
        raise DimensionError("loop points do not match the family's parameter dimension")
    ref = _as_reference(rho)
    if np.all(pts == pts[0]):
        return PhaseResult(0.0, 0.0)
    betas = np.array([berry_connection(family, ref, q) for q in pts])
    seg = np.diff(pts, axis=0)
    mean_beta = 0.5 * (betas[1:] + betas[:-1])
    raw = -float(np.sum(mean_beta * seg))
    return PhaseResult(float(np.mod(raw, 2 * math.pi)), raw)


def rectangle_loop(center, axis_a: int, axis_b: int, a_range, b_range,
                   na: int, nb: int) -> np.ndarray:
    """Counter-clockwise boundary of a coordinate rectangle in the ``(a, b)`` plane."""
    center = np.asarray(center, dtype=float)
    a0, a1 = map(float, a_range)
    b0, b1 = map(float, b_range)
    ta = np.linspace(a0, a1, na + 1)
    tb = np.linspace(b0, b1, nb + 1)
    edges = [
        np.column_stack([ta, np.full_like(ta, b0)]),
        np.column_stack([np.full_like(tb, a1), tb])[1:],
        np.column_stack([ta[::-1], np.full_like(ta, b1)])[1:],
        np.column_stack([np.full_like(tb, a0), tb[::-1]])[1:],
    ]
    ab = np.vstack(edges)
    ab[-1] = ab[0]
    pts = np.tile(center, (len(ab), 1))
    pts[:, axis_a] = ab[:, 0]
    pts[:, axis_b] = ab[:, 1]
    return pts


def geometric_phase_surface(family: UnitaryFamily, rho, center, axis_a: int, axis_b: int,
                            a_range, b_range, na: int, nb: int) -> float:
    """``-iint sigma`` over a coordinate rectangle, midpoint rule.

    The integrand is the ``da ^ db`` coefficient ``2 Im Q_ab``; a positive
    orientation is ``a`` increasing then ``b`` increasing, matching
    :func:`rectangle_loop`.
    """
    d = family.param_dim
    for ax in (axis_a, axis_b):
        if not 0 <= ax < d:
            raise IndexError(f"axis {ax} out of range for a {d}-parameter family")
    if axis_a == axis_b:
        raise ValueError("surface axes must differ")
    ref = _as_reference(rho)
    a0, a1 = map(float, a_range)
    b0, b1 = map(float, b_range)
    if a0 == a1 or b0 == b1:
        return 0.0
    ha = (a1 - a0) / na
    hb = (b1 - b0) / nb
    point = np.asarray(center, dtype=float).copy()
    total = 0.0
    for i in range(na):
        point[axis_a] = a0 + (i + 0.5) * ha
        row = []
        for j in range(nb):
            point[axis_b] = b0 + (j + 0.5) * hb
            gens = generators(family, point)
            q = _covariance([gens[axis_a], gens[axis_b]], ref)
            row.append(2.0 * q[0, 1].imag)
        total += math.fsum(row)
    return -total * ha * hb


def loschmidt_echo_exact(U_ref, U_pert, psi) -> float:
    """``|<psi| U_pert^dag U_ref |psi>|^2``."""
    U_ref = check_unitary(U_ref, "U_ref")
    U_pert = check_unitary(U_pert, "U_pert")
    psi = as_state(psi)
    check_same_dim(U_ref, U_pert, np.empty((len(psi), len(psi))))
    amp = np.vdot(U_pert @ psi, U_ref @ psi)
    return float(min(1.0, abs(amp) ** 2))


def loschmidt_echo_first_order(g, delta, divisor: float = 1.0):
    """Quadratic echo estimate ``1 - delta^T g delta / divisor``.

    With ``g = Re Q`` built from ``A = i U^dag dU`` the exact echo expands as
    ``1 - delta^T g delta + O(delta^3)``, hence ``divisor=1``. Pass
    ``divisor=4`` for the convention that writes ``ds^2 = 4 (1 - F^2)``.

    Returns ``(value, clamped)``; ``clamped`` is true when the raw estimate
    fell outside ``[0, 1]``, i.e. ``delta`` is outside the perturbative regime.
    """
    g = np.asarray(g, dtype=float)
    delta = np.asarray(delta, dtype=float)
    if g.shape != (delta.size, delta.size):
        raise DimensionError(f"metric shape {g.shape} does not match delta of size {delta.size}")
    raw = 1.0 - float(delta @ g @ delta) / divisor
    value = min(1.0, max(0.0, raw))
    return value, value != raw


def oqgt_compose_additive(parts: Sequence[GeometricTensor]) -> GeometricTensor:
    """Sum of per-factor tensors for a family and reference state that factorize alike."""
    parts = list(parts)
    if not parts:
        raise ValueError("need at least one part")
    d = parts[0].dim
    point = parts[0].point
    for part in parts[1:]:
        if part.dim != d:
            raise DimensionError("parts have different parameter dimensions")
        if (point is None) != (part.point is None) or (
                point is not None and not np.array_equal(point, part.point)):
            raise ValueError("parts are evaluated at different points")
    q = np.zeros((d, d), dtype=complex)
    for part in parts:
        q = q + part.Q
    return GeometricTensor(q, point)


def gauge_fixed_eigh(h, degeneracy_tol=DEGENERACY_TOL):
    """Ascending eigenpairs with each eigenvector's largest entry real positive.

    Raises :class:`DegenerateSpectrumError` when adjacent eigenvalues are closer
    than ``degeneracy_tol``.
    """
    h = as_square(h, "H")
    w, v = np.linalg.eigh(0.5 * (h + h.conj().T))
    if len(w) > 1:
        gaps = np.diff(w)
        i = int(np.argmin(gaps))
        if gaps[i] < degeneracy_tol:
            raise DegenerateSpectrumError((i, i + 1), float(gaps[i]))
    return w, _fix_phases(v)


def _fix_phases(v: np.ndarray) -> np.ndarray:
    idx = np.argmax(np.abs(v), axis=0)
    cols = np.arange(v.shape[1])
    piv = v[idx, cols]
    v = v * (np.abs(piv) / piv)
    # the product leaves O(eps) imaginary residue on the pivot; drop it
    v[idx, cols] = v[idx, cols].real
    return v


def _align(v: np.ndarray, ref: np.ndarray) -> np.ndarray:
    overlap = ref.conj().T @ v
    perm = np.argmax(np.abs(overlap), axis=1)
    if len(set(perm.tolist())) != len(perm):
        raise DegenerateSpectrumError((0, 1), 0.0)
    v = v[:, perm]
    ov = np.einsum("ij,ij->j", ref.conj(), v)
    return v * (np.abs(ov) / ov)


def time_evolution_family(H_family: Callable, t: float, param_dim: int | None = None,
                          H_derivative: Callable | None = None, derivative: str = "spectral",
                          step=DEFAULT_STEP) -> UnitaryFamily:
    """Family ``p -> exp(-i t H(p))`` evaluated through ``eigh``.

    With ``derivative="spectral"`` the derivative of the exponential is taken
    exactly in the eigenbasis of ``H`` (divided differences of ``exp(-i t w)``
    weighting ``V^dag d_mu H V``); ``d_mu H`` comes from ``H_derivative`` when
    given, else from a Ridders-extrapolated difference of ``H``. With
    ``derivative="finite_difference"`` the unitary itself is differenced.
    ``param_dim`` is inferred from ``H_family.param_dim`` when present.
    """
    t = float(t)
    if param_dim is None:
        param_dim = getattr(H_family, "param_dim", None)
        if param_dim is None:
            raise ValueError("param_dim is required for a plain callable")
    if derivative not in ("spectral", "finite_difference"):
        raise ValueError(f"unknown derivative mode {derivative!r}")

    def hamiltonian(coords):
        h = as_square(H_family(coords), "H")
        if not is_hermitian(h, HERMITIAN_TOL):
            raise ValueError("H(p) is not Hermitian within 1e-10")
        return 0.5 * (h + h.conj().T)

    def evolve(coords):
        h = hamiltonian(coords)
        if t == 0.0:
            return np.eye(h.shape[0], dtype=complex)
        w, v = np.linalg.eigh(h)
        return (v * np.exp(-1j * t * w)) @ v.conj().T

    def dH(coords, mu):
        if H_derivative is not None:
            return as_square(H_derivative(coords, mu))
        e = np.zeros(param_dim)
        e[mu] = 1.0
        return ridders(lambda x: hamiltonian(coords + x * e), 0.0, 1e-2)[0]

    def d_evolve(coords, mu):
        h = hamiltonian(coords)
        if t == 0.0:
            return np.zeros_like(h)
        w, v = np.linalg.eigh(h)
        half = 0.5 * np.add.outer(w, w)
        diff = 0.5 * np.subtract.outer(w, w)
        # (e^{-itw_i} - e^{-itw_j}) / (w_i - w_j), stable at w_i = w_j
        kernel = -1j * t * np.exp(-1j * t * half) * np.sinc(t * diff / np.pi)
        dh = v.conj().T @ dH(coords, mu) @ v
        return v @ (kernel * dh) @ v.conj().T

    fam = UnitaryFamily(evolve, param_dim,
                        d_evolve if derivative == "spectral" else None, step=step)
    fam.hamiltonian = H_family
    fam.t = t
    return fam


def spectral_split(H_family: Callable, rho, p, t: float, param_dim: int | None = None,
                   step=DEFAULT_STEP, stencil: str = "ridders",
                   ridders_step: float = 1e-2) -> SpectralSplit:
    """Split the tensor of ``exp(-i t H(p))`` into ``alpha t^2`` and oscillating parts.

    ``rho`` must commute with ``H(p)``; with a nondegenerate spectrum it is
    then diagonal in the eigenbasis, with weights ``rho_i``. The eigenbasis is
    gauge-fixed (ascending energies, largest entry real positive) and frames
    at displaced points are phase-aligned to it before differencing.
    """
    ref = _as_reference(rho)
    p = np.atleast_1d(np.asarray(p, dtype=float))
    d = p.size if param_dim is None else int(param_dim)
    hs = np.broadcast_to(np.asarray(step, dtype=float), (d,))
    h0 = as_square(H_family(p), "H")
    if not is_hermitian(h0, HERMITIAN_TOL):
        raise ValueError("H(p) is not Hermitian within 1e-10")
    check_same_dim(h0, ref.rho)
    comm = np.max(np.abs(ref.rho @ h0 - h0 @ ref.rho))
    if comm > STATIONARY_TOL:
        raise NonStationaryError(f"[rho, H] = {comm:.3e} exceeds 1e-10")
    energies, v0 = gauge_fixed_eigh(h0)
    weights = np.real(np.einsum("ji,jk,ki->i", v0.conj(), ref.rho, v0))

    # conn[mu]_ij = i (d_mu V^dag V)_ij, the connection in the eigenbasis
    conn = []
    dE = []
    for mu in range(d):
        e = np.zeros(d)
        e[mu] = 1.0

        def frame(x):
            if x == 0.0:
                return v0
            return _align(gauge_fixed_eigh(H_family(p + x * e))[1], v0)

        def ham(x):
            return as_square(H_family(p + x * e))

        if stencil == "ridders":
            # keep the widest stencil well inside the smallest level spacing
            slope = np.linalg.norm(central(ham, 0.0, hs[mu]), 2)
            h0 = min(ridders_step, 0.05 * float(np.min(np.diff(energies), initial=np.inf))
                     / max(slope, 1e-300))
            dv = ridders(frame, 0.0, h0)[0]
            dh = ridders(ham, 0.0, h0)[0]
        else:
            dv = central(frame, 0.0, hs[mu])
            dh = central(ham, 0.0, hs[mu])
        a = 1j * (dv.conj().T @ v0)
        conn.append(0.5 * (a + a.conj().T))
        dE.append(np.real(np.einsum("ji,jk,ki->i", v0.conj(), dh, v0)))
    dE = np.array(dE)

    mean = dE @ weights
    alpha = (dE * weights) @ dE.T - np.outer(mean, mean)
    q1 = alpha * t * t

    n = len(energies)
    q2 = np.zeros((d, d), dtype=complex)
    beta_terms = []
    osc = 1.0 - np.cos(np.subtract.outer(energies, energies) * t)
    for i in range(n):
        if weights[i] == 0.0:
            continue
        for j in range(n):
            if j == i:
                continue
            beta = 2.0 * weights[i] * np.outer([c[i, j] for c in conn], [c[j, i] for c in conn])
            beta_terms.append({"i": i, "j": j, "value_munu": beta})
            q2 += beta * osc[i, j]
    return SpectralSplit(q1.astype(complex), q2, alpha, beta_terms, energies, float(t))
