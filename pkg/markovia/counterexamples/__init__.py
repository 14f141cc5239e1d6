"""Executable counterexamples: parity processes and θ-shifted mixtures."""

from .parity import ParityProcessSpec, parity_from_config, parity_pmf, parity_verdicts
from .theta_shift import (
    ThetaShiftSpec,
    coin_mixture_pmf,
    expected_cross_cov,
    ma_shift_verdicts,
    mixture_conditional_cov,
    posterior_spread,
    theta_shift_from_config,
    theta_shift_relation,
    theta_shift_verdicts,
)

__all__ = [
    "ParityProcessSpec",
    "parity_from_config",
    "parity_pmf",
    "parity_verdicts",
    "ThetaShiftSpec",
    "coin_mixture_pmf",
    "expected_cross_cov",
    "ma_shift_verdicts",
    "mixture_conditional_cov",
    "posterior_spread",
    "theta_shift_from_config",
    "theta_shift_relation",
    "theta_shift_verdicts",
]
