"""Gaussian processes indexed by ℕ: models, conditioning and verifiers."""

from .linalg import conditional_blocks, partial_correlations, spd_factor, spd_inverse
from .models import (
    ARCovariance,
    CovarianceModel,
    DiagDominantCovariance,
    ExplicitCovariance,
    IndependentCovariance,
    LatticeKernel,
    MovingAverageCovariance,
    covariance,
    dominance_margin,
    ma_precision_entry,
    model_from_config,
)
from .conditional import (
    ConvergenceTrace,
    ci_test,
    conditional,
    conditional_convergence,
    precision,
)
from .decay import (
    DecayEnvelope,
    DecayTable,
    LatticeMoments,
    g_recursion,
    lattice_g_moments,
    lattice_moment,
    power_geometric_sum,
    validate_envelope,
)
from .spectrum import (
    EigenTrace,
    SymbolAnalysis,
    eigen_bounds,
    fourier_symbol_min,
    verify_gaussian_conditions,
)

__all__ = [
    "conditional_blocks",
    "partial_correlations",
    "spd_factor",
    "spd_inverse",
    "ARCovariance",
    "CovarianceModel",
    "DiagDominantCovariance",
    "ExplicitCovariance",
    "IndependentCovariance",
    "LatticeKernel",
    "MovingAverageCovariance",
    "covariance",
    "dominance_margin",
    "ma_precision_entry",
    "model_from_config",
    "ConvergenceTrace",
    "ci_test",
    "conditional",
    "conditional_convergence",
    "precision",
    "DecayEnvelope",
    "DecayTable",
    "LatticeMoments",
    "g_recursion",
    "lattice_g_moments",
    "lattice_moment",
    "power_geometric_sum",
    "validate_envelope",
    "EigenTrace",
    "SymbolAnalysis",
    "eigen_bounds",
    "fourier_symbol_min",
    "verify_gaussian_conditions",
]
