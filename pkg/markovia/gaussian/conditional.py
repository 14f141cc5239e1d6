"""Conditional distributions, precision matrices and Gaussian CI tests."""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..config import DEFAULT_SETTINGS
from ..errors import DomainError, ModelClassError
from ..graph import VertexSet, vertex_set
from ..log import get_logger
from ..report import Verdict
from .linalg import conditional_blocks, partial_correlations, spd_inverse
from .models import CovarianceModel

logger = get_logger(__name__)


def _require_model(m: Any) -> CovarianceModel:
    if not isinstance(m, CovarianceModel):
        raise ModelClassError(
            f"{type(m).__name__} is not a Gaussian covariance model"
        )
    return m


def _disjoint(**sets: Sequence[int]) -> None:
    seen: dict[int, str] = {}
    for name, s in sets.items():
        for v in s:
            if v in seen:
                raise DomainError(f"vertex {v} appears in both {seen[v]} and {name}")
            seen[v] = name


def conditional(
    m: CovarianceModel,
    a: Iterable[int],
    b: Iterable[int],
    cond_cap: float = DEFAULT_SETTINGS.condition_cap,
) -> tuple[np.ndarray, np.ndarray]:
    """Mean coefficients Σ_AB Σ_B^{-1} and covariance Σ_{A|B} of X_A given X_B.

    Rows follow sorted a, columns of the coefficient matrix follow b in the
    order given.
    """
    _require_model(m)
    a = list(vertex_set(a))
    b = list(b)
    if len(set(b)) != len(b):
        raise DomainError("conditioning indices repeat")
    _disjoint(a=a, b=b)
    sigma = m.matrix(a + b)
    na = len(a)
    return conditional_blocks(sigma, list(range(na)), list(range(na, na + len(b))), cond_cap)


def precision(
    m: CovarianceModel,
    s: Iterable[int],
    cond_cap: float = DEFAULT_SETTINGS.condition_cap,
) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of Σ_s and the matrix of partial correlations."""
    _require_model(m)
    idx = vertex_set(s)
    inv = spd_inverse(m.matrix(idx), cond_cap)
    return inv, partial_correlations(inv)


def ci_test(
    m: CovarianceModel,
    a: Iterable[int],
    b: Iterable[int],
    c: Iterable[int],
    tol: float = DEFAULT_SETTINGS.gaussian_tol,
    cond_cap: float = DEFAULT_SETTINGS.condition_cap,
) -> bool:
    """True iff the (a, b) cross block of Σ_{a∪b | c} is entrywise within tol."""
    _require_model(m)
    a, b, c = vertex_set(a), vertex_set(b), vertex_set(c)
    if not a or not b:
        raise DomainError("ci_test needs nonempty a and b")
    _disjoint(a=a, b=b, c=c)
    _, cond = conditional(m, a + b, c, cond_cap)
    # conditional() sorts a ∪ b, so map positions back.
    order = list(vertex_set(a + b))
    rows = [order.index(v) for v in a]
    cols = [order.index(v) for v in b]
    return bool(np.max(np.abs(cond[np.ix_(rows, cols)])) <= tol)


@dataclass
class ConvergenceTrace:
    """Successive conditional pairs for nested conditioning prefixes."""

    a: VertexSet
    b_order: tuple[int, ...]
    rows: list[dict[str, Any]] = field(default_factory=list)
    final_coefficients: np.ndarray | None = None
    final_cond_cov: np.ndarray | None = None
    tol: float = 1e-6
    window: int = 5

    @property
    def deltas(self) -> list[float]:
        return [max(r["delta_cond_cov"], r["delta_coef"]) for r in self.rows]

    @property
    def verdict(self) -> Verdict:
        """PASS once the last `window` differences sit below tol; never FAIL."""
        tail = self.deltas[-self.window :]
        if len(tail) == self.window and max(tail) < self.tol:
            return Verdict.PASS
        return Verdict.INCONCLUSIVE

    def first_below(self, tol: float | None = None) -> int | None:
        """First step after which every difference stays below tol."""
        tol = self.tol if tol is None else tol
        deltas = self.deltas
        for k in range(len(deltas)):
            if all(d < tol for d in deltas[k:]):
                return self.rows[k]["n"]
        return None


def conditional_convergence(
    m: CovarianceModel,
    a: Iterable[int],
    b_order: Sequence[int],
    steps: int | None = None,
    tol: float = 1e-6,
    cond_cap: float = DEFAULT_SETTINGS.condition_cap,
) -> ConvergenceTrace:
    """Cauchy trace of (Σ_AB_n Σ_B_n^{-1}, Σ_{A|B_n}) over prefixes B_n of b_order."""
    _require_model(m)
    a = vertex_set(a)
    order = list(b_order)
    if len(set(order)) != len(order):
        raise DomainError("b_order must not repeat indices")
    _disjoint(a=a, b_order=order)
    steps = len(order) if steps is None else steps
    if steps > len(order):
        raise DomainError(f"{steps} steps requested but b_order has {len(order)} indices")

    trace = ConvergenceTrace(a=a, b_order=tuple(order[:steps]), tol=tol)
    prev_coef, prev_cond = conditional(m, a, [], cond_cap)
    for n in range(1, steps + 1):
        coef, cond = conditional(m, a, order[:n], cond_cap)
        padded = np.hstack([prev_coef, np.zeros((len(a), 1))])
        trace.rows.append(
            {
                "n": n,
                "delta_cond_cov": float(np.max(np.abs(cond - prev_cond))),
                "delta_coef": float(np.max(np.abs(coef - padded))),
                "cond_var_min": float(np.linalg.eigvalsh(cond)[0]),
            }
        )
        prev_coef, prev_cond = coef, cond
    trace.final_coefficients = prev_coef
    trace.final_cond_cov = prev_cond
    logger.debug("conditional trace for %s: %d steps, %s", list(a), steps, trace.verdict.value)
    return trace
