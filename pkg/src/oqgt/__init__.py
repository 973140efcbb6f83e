"""Operator quantum geometric tensor of parameterized unitaries, with a
closed-form XY chain model, brute-force oracles and a scan CLI."""

__version__ = "0.1.0"

from ._validation import (
    CRITICAL_GAP_TOL,
    DEFAULT_STEP,
    DEGENERACY_TOL,
    DENSITY_TOL,
    HERMITIAN_TOL,
    PURITY_TOL,
    SPLIT_TOL,
    STATIONARY_TOL,
    UNITARY_TOL,
    CriticalModeError,
    DegenerateSpectrumError,
    DimensionError,
    FamilyEvaluationError,
    NonStationaryError,
    NotDensityError,
    NotUnitaryError,
)
from .core import (
    GeometricTensor,
    PhaseResult,
    ReferenceState,
    SpectralSplit,
    UnitaryFamily,
    berry_connection,
    curvature,
    gauge_fixed_eigh,
    generators,
    geometric_phase_line,
    geometric_phase_surface,
    loschmidt_echo_exact,
    loschmidt_echo_first_order,
    metric,
    operator_fidelity,
    operator_inner_product,
    oqgt,
    oqgt_compose_additive,
    rectangle_loop,
    spectral_split,
    state_qgt,
    time_evolution_family,
)
from .xy import (
    XYParams,
    bogoliubov_angle,
    chain_echo,
    chain_oqgt,
    dispersion,
    effective_field,
    mode_data,
    mode_oqgt,
    mode_unitary,
)
from .scan import ScanConfig, run_scan
from .estimator import XYChainGeometry
