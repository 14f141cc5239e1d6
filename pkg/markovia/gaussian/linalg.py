"""Guarded symmetric factorizations."""

import numpy as np
import scipy.linalg

from ..errors import DomainError, IllConditionedError, NumericError
from ..log import get_logger

logger = get_logger(__name__)

DEFAULT_CONDITION_CAP = 1e12


def as_symmetric(matrix: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Validate squareness and symmetry; return a float copy."""
    m = np.array(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DomainError("matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    if m.size and np.max(np.abs(m - m.T)) > tol * scale:
        raise DomainError("matrix is not symmetric")
    return (m + m.T) / 2


def spd_factor(
    matrix: np.ndarray, cond_cap: float = DEFAULT_CONDITION_CAP, what: str = "block"
) -> tuple[np.ndarray, bool]:
    """Cholesky factor of an SPD block, refusing singular or ill-conditioned input."""
    eig = scipy.linalg.eigvalsh(matrix)
    lam_min, lam_max = float(eig[0]), float(eig[-1])
    if lam_min <= 0:
        raise NumericError(f"{what} is not positive definite", lam_min)
    condition = lam_max / lam_min
    if condition > cond_cap:
        logger.debug("%s: condition number %.3g above cap %.3g", what, condition, cond_cap)
        raise IllConditionedError(condition, cond_cap, lam_min)
    try:
        return scipy.linalg.cho_factor(matrix, lower=True)
    except np.linalg.LinAlgError:
        raise NumericError(f"{what} is not positive definite", lam_min)


def conditional_blocks(
    cov: np.ndarray,
    a: list[int],
    b: list[int],
    cond_cap: float = DEFAULT_CONDITION_CAP,
) -> tuple[np.ndarray, np.ndarray]:
    """Return (Σ_AB Σ_B^{-1}, Σ_A − Σ_AB Σ_B^{-1} Σ_BA) for positional indices."""
    s_aa = cov[np.ix_(a, a)]
    if not b:
        return np.zeros((len(a), 0)), s_aa.copy()
    s_bb = cov[np.ix_(b, b)]
    s_ba = cov[np.ix_(b, a)]
    factor = spd_factor(s_bb, cond_cap, what="conditioning block")
    coef = scipy.linalg.cho_solve(factor, s_ba).T
    cond = s_aa - coef @ s_ba
    return coef, (cond + cond.T) / 2


def spd_inverse(cov: np.ndarray, cond_cap: float = DEFAULT_CONDITION_CAP) -> np.ndarray:
    factor = spd_factor(cov, cond_cap, what="covariance block")
    inv = scipy.linalg.cho_solve(factor, np.eye(cov.shape[0]))
    return (inv + inv.T) / 2


def partial_correlations(precision: np.ndarray) -> np.ndarray:
    """−σ^{ij}/√(σ^{ii}σ^{jj}) off the diagonal, 1 on it."""
    d = np.sqrt(np.diag(precision))
    pc = -precision / np.outer(d, d)
    np.fill_diagonal(pc, 1.0)
    return pc
