"""Eigenvalue evidence, the lattice symbol floor and the aggregate verifier."""

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import scipy.linalg

from ..config import DEFAULT_SETTINGS, Settings
from ..errors import DomainError, NumericError, SizeError
from ..log import get_logger
from ..parallel import ordered_map
from ..report import DiagnosticReport, Verdict
from .decay import DecayEnvelope, g_recursion, lattice_g_moments
from .models import (
    ARCovariance,
    CovarianceModel,
    DiagDominantCovariance,
    ExplicitCovariance,
    IndependentCovariance,
    LatticeKernel,
    dominance_margin,
)

logger = get_logger(__name__)

INTERLACING_TOL = 1e-10
SERIES_TAIL = 1e-12
MIN_GRID = 64


@dataclass
class EigenTrace:
    """Extreme eigenvalues of nested leading blocks."""

    rows: list[dict[str, Any]] = field(default_factory=list)
    violations: list[str] = field(default_factory=list)

    @property
    def interlacing_ok(self) -> bool:
        return not any(v.startswith("interlacing") for v in self.violations)

    @property
    def row_sum_ok(self) -> bool:
        return not any(v.startswith("row sum") for v in self.violations)

    @property
    def lambda_min(self) -> float:
        return min(r["lambda_min"] for r in self.rows)

    @property
    def lambda_max(self) -> float:
        return max(r["lambda_max"] for r in self.rows)


def eigen_bounds(
    m: CovarianceModel, sizes: Iterable[int], settings: Settings = DEFAULT_SETTINGS
) -> EigenTrace:
    """λ_min, λ_max and max absolute row sum of Σ_{1..n} for each n in sizes.

    Sizes are processed in increasing order so that Cauchy interlacing
    (λ_min non-increasing, λ_max non-decreasing) can be checked.
    """
    sizes = sorted(set(int(n) for n in sizes))
    if not sizes:
        raise DomainError("eigen_bounds needs at least one size")
    if sizes[0] < 1:
        raise DomainError(f"block sizes must be positive, got {sizes[0]}")
    if sizes[-1] > settings.eigen_cap:
        raise SizeError("eigen_bounds block", sizes[-1], settings.eigen_cap)

    sigma = m.leading(sizes[-1])

    def solve(n: int) -> dict[str, Any]:
        block = sigma[:n, :n]
        try:
            values = scipy.linalg.eigvalsh(block)
        except (scipy.linalg.LinAlgError, ValueError) as e:
            raise NumericError(f"eigen-solve failed at size {n}: {e}")
        return {
            "n": n,
            "lambda_min": float(values[0]),
            "lambda_max": float(values[-1]),
            "max_row_sum": float(np.max(np.sum(np.abs(block), axis=1))),
        }

    trace = EigenTrace(rows=ordered_map(solve, sizes, settings))
    for prev, row in zip(trace.rows, trace.rows[1:]):
        if row["lambda_min"] > prev["lambda_min"] + INTERLACING_TOL:
            trace.violations.append(
                f"interlacing: λ_min rises from {prev['lambda_min']:.6g} (n={prev['n']}) "
                f"to {row['lambda_min']:.6g} (n={row['n']})"
            )
        if row["lambda_max"] < prev["lambda_max"] - INTERLACING_TOL:
            trace.violations.append(
                f"interlacing: λ_max falls from {prev['lambda_max']:.6g} (n={prev['n']}) "
                f"to {row['lambda_max']:.6g} (n={row['n']})"
            )
    for row in trace.rows:
        if row["lambda_max"] > row["max_row_sum"] + INTERLACING_TOL:
            trace.violations.append(
                f"row sum: λ_max {row['lambda_max']:.6g} exceeds {row['max_row_sum']:.6g} "
                f"at n={row['n']}"
            )
    logger.debug("eigen bounds for %d sizes up to %d", len(sizes), sizes[-1])
    return trace


@dataclass(frozen=True)
class SymbolAnalysis:
    """Certified range of g(x, V) = Σ_j exp(−j²/V) e^{ijx} and its d-fold product."""

    scale: float
    dimension: int
    grid_n: int
    order: int
    tail_bound: float
    m_g: float
    g_max: float
    sample_min: float
    argmin: float

    @property
    def certified(self) -> bool:
        return self.m_g > 0

    @property
    def m_f(self) -> float:
        """Eigenvalue floor m_g^d; only meaningful when certified."""
        return self.m_g**self.dimension if self.certified else 0.0

    @property
    def M_f(self) -> float:
        return self.g_max**self.dimension

    def to_dict(self) -> dict[str, Any]:
        return {
            "scale": self.scale,
            "dimension": self.dimension,
            "grid_n": self.grid_n,
            "order": self.order,
            "tail_bound": self.tail_bound,
            "m_g": self.m_g,
            "m_f": self.m_f,
            "M_f": self.M_f,
            "sample_min": self.sample_min,
            "argmin": self.argmin,
            "certified": self.certified,
        }


def _series_tail(order: int, V: float) -> float:
    """Upper bound on 2 Σ_{j>order} exp(−j²/V)."""
    lead = math.exp(-((order + 1) ** 2) / V)
    return 2 * lead / (1 - math.exp(-(2 * order + 3) / V))


def fourier_symbol_min(
    d: int, V: float, grid_n: int = 256, order: int | None = None
) -> SymbolAnalysis:
    """Certified lower bound on min_x g(x, V) over [0, π].

    g is even and 2π-periodic, so [0, π] covers every x. Each point of
    [0, π] lies within h/2 of a grid point x_k, where

        g(y) ≥ g(x_k) − |g′(x_k)| h/2 − L₂ (h/2)² / 2,

    with L₂ = 2 Σ j² e^{−j²/V} bounding |g″|. The series tail bound T is
    subtracted on top.

    Args:
        d: lattice dimension.
        V: kernel scale.
        grid_n: number of grid intervals on [0, π] (at least 64).
        order: partial-sum cutoff; chosen automatically when None.
    """
    if not V > 0:
        raise DomainError(f"kernel scale must be positive, got {V}")
    if d < 1:
        raise DomainError(f"dimension must be >= 1, got {d}")
    if grid_n < MIN_GRID:
        raise DomainError(f"grid resolution {grid_n} is below {MIN_GRID}")
    if order is None:
        order = 1
        while _series_tail(order, V) >= SERIES_TAIL:
            order += 1
    elif order < 1 or _series_tail(order, V) >= SERIES_TAIL:
        raise DomainError(
            f"series order {order} leaves a tail above {SERIES_TAIL:g} for V={V}"
        )
    tail = _series_tail(order, V)

    j = np.arange(1, order + 1, dtype=float)
    weights = np.exp(-(j**2) / V)
    h = math.pi / grid_n
    x = np.linspace(0.0, math.pi, grid_n + 1)
    g = 1 + 2 * np.cos(np.outer(x, j)) @ weights
    slope = np.abs(-2 * np.sin(np.outer(x, j)) @ (j * weights))
    curvature = 2 * float(np.sum(j**2 * weights))

    lower = g - slope * h / 2 - curvature * (h / 2) ** 2 / 2
    k = int(np.argmin(lower))
    analysis = SymbolAnalysis(
        scale=V,
        dimension=d,
        grid_n=grid_n,
        order=order,
        tail_bound=tail,
        m_g=float(lower[k] - tail),
        g_max=float(1 + 2 * np.sum(weights) + tail),
        sample_min=float(np.min(g)),
        argmin=float(x[k]),
    )
    logger.debug(
        "symbol V=%s d=%d order=%d: m_g=%.6g certified=%s",
        V, d, order, analysis.m_g, analysis.certified,
    )
    return analysis


def _floor_check(
    report: DiagnosticReport,
    name: str,
    trace: EigenTrace,
    floor: float,
    ceiling: float,
    tol: float,
    anchor: str,
    **values: Any,
) -> None:
    witnesses = [
        f"n={r['n']}: spectrum [{r['lambda_min']:.6g}, {r['lambda_max']:.6g}]"
        for r in trace.rows
        if r["lambda_min"] < floor - tol or r["lambda_max"] > ceiling + tol
    ]
    report.add(
        name,
        Verdict.REFUTED if witnesses else Verdict.SUPPORTED,
        anchor=anchor,
        detail=f"every eigenvalue in [{floor:.6g}, {ceiling:.6g}]"
        if not witnesses
        else f"{len(witnesses)} blocks leave [{floor:.6g}, {ceiling:.6g}]",
        witnesses=witnesses,
        floor=floor,
        ceiling=ceiling,
        **values,
    )


def _lattice_evidence(
    report: DiagnosticReport, m: LatticeKernel, trace: EigenTrace, tol: float
) -> None:
    if m.alpha == 2.0:
        symbol = fourier_symbol_min(m.dimension, m.scale)
        report.traces["symbol"] = [symbol.to_dict()]
        if not symbol.certified:
            report.add(
                "symbol floor",
                Verdict.INCONCLUSIVE,
                anchor="gaussian.symbol",
                detail=f"certificate not positive (best bound {symbol.m_g:.6g})",
                m_g=symbol.m_g,
            )
            return
        _floor_check(
            report, "symbol sandwich", trace, symbol.m_f, symbol.M_f, tol,
            "gaussian.symbol", m_g=symbol.m_g,
        )
        return
    margin = dominance_margin(m.dimension, m.alpha, m.scale)
    if margin <= 0:
        report.add(
            "dominance floor",
            Verdict.INCONCLUSIVE,
            anchor="gaussian.dominance",
            detail=f"kernel is not diagonally dominant (margin {margin:.3g}); no certified floor",
            margin=margin,
        )
        return
    _floor_check(report, "Gershgorin floor", trace, margin, 2.0, tol, "gaussian.dominance")


def _ar_evidence(
    report: DiagnosticReport, m: ARCovariance, trace: EigenTrace, tol: float
) -> None:
    size = trace.rows[-1]["n"]
    sigma = m.leading(size)
    bound = 1.0 / m.delta
    excess = [
        f"var(X_{n}) = {sigma[n - 1, n - 1]:.6g} > 1/δ = {bound:.6g}"
        for n in range(1, size + 1)
        if sigma[n - 1, n - 1] > bound + 1e-10
    ]
    report.add(
        "AR variance bound",
        Verdict.REFUTED if excess else Verdict.SUPPORTED,
        anchor="gaussian.ar",
        detail=f"var(X_n) ≤ 1/δ for n ≤ {size}"
        if not excess
        else f"{len(excess)} variances exceed 1/δ",
        witnesses=excess[:20],
        variance_max=float(np.max(np.diag(sigma))),
        bound=bound,
        impulse_bound=m.variance_bound(size),
        delta=m.delta,
    )

    prec = m.exact_precision(size)
    n_idx = np.arange(size)
    band = np.abs(n_idx[:, None] - n_idx[None, :]) > m.order
    numeric = scipy.linalg.inv(sigma)
    leak = float(np.max(np.abs(numeric[band]))) if band.any() else 0.0
    report.add(
        "AR precision banding",
        Verdict.SUPPORTED if leak <= 1e-8 * max(1.0, float(np.max(np.abs(prec)))) else Verdict.INCONCLUSIVE,
        anchor="gaussian.ar",
        detail=f"largest precision entry beyond band {m.order}: {leak:.3g}",
        band_leak=leak,
    )

    sigma_ii = float(np.max(np.diag(prec)))
    floor = 1.0 / ((2 * m.order + 1) * float(np.max(np.abs(prec))))
    _floor_check(
        report, "AR eigenvalue floor", trace, floor, math.inf, tol, "gaussian.ar",
        max_precision_diagonal=sigma_ii,
    )


def verify_gaussian_conditions(
    m: CovarianceModel,
    sizes: Sequence[int],
    envelope: DecayEnvelope | None = None,
    K: int = 200,
    eps: Iterable[float] = (0.5,),
    settings: Settings = DEFAULT_SETTINGS,
) -> DiagnosticReport:
    """Evidence for the uniform eigenvalue bounds and the g_n summability.

    Args:
        m: covariance model to audit.
        sizes: leading block sizes for the eigenvalue evidence.
        envelope: decay envelope g_0. AR and independent models get a
            default one when None; lattice kernels use the moment recursion.
        K: cutoff for the g_n tables.
        eps: exponents tested in Σ_k g_n(i, k) k^eps, one verdict each.
        settings: tolerances, caps and thread count.

    Returns:
        A report whose verdict is supported, refuted or inconclusive.
    """
    tol = settings.gaussian_tol
    report = DiagnosticReport(
        name="gaussian conditions", anchor="gaussian.conditions", tolerance=tol
    )
    sizes = sorted(set(sizes))
    if isinstance(m, LatticeKernel) and m.alpha == 2.0:
        # Centered cubes carry the symbol sandwich.
        for radius in range(1, 4):
            cube = (2 * radius + 1) ** m.dimension
            if cube <= settings.eigen_cap:
                sizes.append(cube)

    # Step 1: eigenvalue evidence
    try:
        trace = eigen_bounds(m, sizes, settings)
    except NumericError as e:
        report.add(
            "eigenvalue evidence",
            Verdict.INCONCLUSIVE,
            anchor="gaussian.eigen",
            detail=str(e),
        )
        trace = None
    if trace is not None:
        report.traces["eigen"] = trace.rows
        singular = [r for r in trace.rows if r["lambda_min"] <= tol]
        report.add(
            "positive definite blocks",
            Verdict.REFUTED if singular else Verdict.SUPPORTED,
            anchor="gaussian.eigen",
            detail=f"λ_min = {trace.lambda_min:.6g} over sizes {[r['n'] for r in trace.rows]}"
            if not singular
            else f"block of size {singular[0]['n']} has λ_min = {singular[0]['lambda_min']:.3g}",
            witnesses=[f"n={r['n']}: λ_min={r['lambda_min']:.3g}" for r in singular],
            lambda_min=trace.lambda_min,
            lambda_max=trace.lambda_max,
        )
        report.add(
            "interlacing and row sums",
            Verdict.SUPPORTED if not trace.violations else Verdict.INCONCLUSIVE,
            anchor="gaussian.eigen",
            detail="consistent" if not trace.violations else "numerical inconsistency",
            witnesses=trace.violations,
        )

        # Step 2: model-specific floor and ceiling
        if isinstance(m, LatticeKernel):
            _lattice_evidence(report, m, trace, tol)
        elif isinstance(m, DiagDominantCovariance):
            floor, ceiling = m.gershgorin_bounds()
            _floor_check(report, "Gershgorin floor", trace, floor, ceiling, tol, "gaussian.dominance")
        elif isinstance(m, ARCovariance):
            _ar_evidence(report, m, trace, tol)
        elif isinstance(m, IndependentCovariance):
            _floor_check(report, "constant spectrum", trace, m.variance, m.variance, tol, "gaussian.eigen")
        elif isinstance(m, ExplicitCovariance) and trace.rows[-1]["n"] == m.size:
            report.notes.append("finite model: the full spectrum was computed")
        else:
            report.add(
                "eigenvalue floor",
                Verdict.INCONCLUSIVE,
                anchor="gaussian.eigen",
                detail=f"no certified floor for {m.variant} models; finite blocks are evidence only",
            )

    # Step 3: g_n summability per exponent
    if envelope is None:
        if isinstance(m, ARCovariance):
            envelope = DecayEnvelope.ar(m.delta, m.order)
        elif isinstance(m, IndependentCovariance):
            envelope = DecayEnvelope("diagonal", c=m.variance)
    if envelope is None and isinstance(m, LatticeKernel):
        decay_rows = []
        for e in eps:
            moments = lattice_g_moments(m, e)
            report.add(
                f"g_n summability (eps={e})",
                Verdict.SUPPORTED if moments.finite else Verdict.INCONCLUSIVE,
                anchor="gaussian.decay",
                detail=f"lattice moments M_n({moments.q:g}): "
                + ", ".join(f"{v:.4g}" for v in moments.moments),
                eps=e,
                q=moments.q,
            )
            decay_rows.extend({"eps": e, **row} for row in moments.rows())
        report.traces["decay"] = decay_rows
    elif envelope is None:
        report.add(
            "g_n summability",
            Verdict.INCONCLUSIVE,
            anchor="gaussian.decay",
            detail=f"no decay envelope for {m.variant} model",
        )
    else:
        decay_rows = []
        for e in eps:
            try:
                table = g_recursion(m, envelope, K=K, eps=e)
            except DomainError as err:
                report.add(
                    f"g_n summability (eps={e})",
                    Verdict.INCONCLUSIVE,
                    anchor="gaussian.decay",
                    detail=str(err),
                )
                continue
            statuses = table.statuses
            if "infinite" in statuses:
                verdict = Verdict.REFUTED
            elif "overflow" in statuses:
                verdict = Verdict.INCONCLUSIVE
            else:
                verdict = Verdict.SUPPORTED
            report.add(
                f"g_n summability (eps={e})",
                verdict,
                anchor="gaussian.decay",
                detail=f"levels: {', '.join(statuses)}",
                eps=e,
                K=K,
                monotone=table.monotone(),
            )
            decay_rows.extend({"eps": e, **row} for row in table.rows())
        if decay_rows:
            report.traces["decay"] = decay_rows

    logger.info("gaussian conditions for %s: %s", m.variant, report.verdict.value)
    return report
