"""Entanglement and CHSH-Bell analysis of two-qubit states.

Quantifies how strongly a two-qubit state (the Werner singlet/unpolarized
mixture being the central case) can violate the CHSH inequality, estimates
spin correlations from coincidence counts, and fits the mixing weight to
measured data.
"""
from .bell import (
    AnalyzerDirections,
    BellReport,
    DegenerateD,
    NonUnitDirection,
    bell_mean,
    horodecki_max,
    optimal_directions,
    refine_directions,
    tangle,
    violates_chsh,
)
from .linalg import (
    NoConvergence,
    NotHermitian,
    NotPSD,
    NotSymmetric,
    Spectrum,
    eig_hermitian,
    eig_symmetric3,
    sqrt_psd,
)
from .protocol import (
    AngleSettings,
    ChshDatum,
    CountTable,
    EmptyCounts,
    EmptyData,
    FitResult,
    LengthMismatch,
    NonpositiveError,
    angle_to_direction,
    chi_square,
    chsh_datum_from_counts,
    chsh_value,
    correlation,
    estimate_correlation,
    fit_gamma,
    group_counts,
)
from .simulate import SimConfig, joint_probabilities, simulate
from .states import (
    BlochVectorTooLong,
    DensityMatrix,
    GammaOutOfRange,
    NotPositive,
    PauliDecomposition,
    TraceNotOne,
    compose,
    decompose,
    phi_minus,
    phi_plus,
    product_state,
    purity,
    singlet,
    triplet0,
    unpolarized,
    validate,
    werner,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyzerDirections",
    "AngleSettings",
    "BellReport",
    "BlochVectorTooLong",
    "ChshDatum",
    "CountTable",
    "DegenerateD",
    "DensityMatrix",
    "EmptyCounts",
    "EmptyData",
    "FitResult",
    "GammaOutOfRange",
    "LengthMismatch",
    "NoConvergence",
    "NonUnitDirection",
    "NonpositiveError",
    "NotHermitian",
    "NotPSD",
    "NotPositive",
    "NotSymmetric",
    "PauliDecomposition",
    "SimConfig",
    "Spectrum",
    "TraceNotOne",
    "angle_to_direction",
    "bell_mean",
    "chi_square",
    "chsh_datum_from_counts",
    "chsh_value",
    "compose",
    "correlation",
    "decompose",
    "eig_hermitian",
    "eig_symmetric3",
    "estimate_correlation",
    "fit_gamma",
    "group_counts",
    "horodecki_max",
    "joint_probabilities",
    "optimal_directions",
    "phi_minus",
    "phi_plus",
    "product_state",
    "purity",
    "refine_directions",
    "simulate",
    "singlet",
    "sqrt_psd",
    "tangle",
    "triplet0",
    "unpolarized",
    "validate",
    "violates_chsh",
    "werner",
]
