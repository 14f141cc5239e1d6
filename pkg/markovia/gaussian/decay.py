"""The g_n covariance-decay recursion with certified tails.

g_0 is a user envelope dominating |cov(i, j)|, and

    g_{n+1}(i, j) = g_n(i, j) + Σ_k g_n(i, k) g_n(k, j).

The table holds i, j ≤ K. Terms with k > K are bounded with a majorant
E_n(t) = a_n (1 + t)^{p_n} ρ^t of g_n at distance t, valid for every pair.
E_0 comes from the envelope; convolving the majorant with itself gives
a_{n+1} = a_n + a_n² (1 + 2 S(2p_n, ρ², 1)) and p_{n+1} = 2p_n + 1, where
S(q, r, t0) = Σ_{t≥t0} (1+t)^q r^t.
"""

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..errors import ConfigError, DomainError
from ..log import get_logger
from .models import CovarianceModel, LatticeKernel

logger = get_logger(__name__)

LEVELS = 4


def power_geometric_sum(q: float, r: float, t0: int = 0) -> float:
    """Certified upper bound on S(q, r, t0) = Σ_{t≥t0} (1+t)^q r^t.

    Returns inf when the series diverges (r ≥ 1) and may overflow to inf
    for very large q; callers tell the two apart by checking r.
    """
    if r < 0:
        raise DomainError(f"ratio must be nonnegative, got {r}")
    if r == 0:
        return 1.0 if t0 <= 0 else 0.0
    if r >= 1:
        return math.inf
    t = max(t0, 0)
    total = 0.0
    limit = (1 + r) / 2
    log_r = math.log(r)
    while True:
        log_term = q * math.log1p(t) + t * log_r
        if log_term > 700:
            return math.inf
        term = math.exp(log_term)
        total += term
        # Successive ratio ((t+2)/(t+1))^q · r decreases in t.
        ratio = ((t + 2) / (t + 1)) ** q * r
        if ratio <= limit and term * ratio / (1 - ratio) <= 1e-17 * max(total, 1e-300):
            return total + term * ratio / (1 - ratio)
        t += 1


@dataclass(frozen=True)
class DecayEnvelope:
    """User-declared g_0: geometric c·ρ^{|i−j|}, Gaussian c·exp(−(i−j)²/V),
    diagonal c·1[i=j], or zero."""

    kind: str
    c: float = 0.0
    rho: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in ("geometric", "gaussian", "diagonal", "zero"):
            raise DomainError(f"unknown envelope kind {self.kind!r}")
        if self.c < 0 or self.rho < 0 or self.scale <= 0:
            raise DomainError("envelope parameters must be nonnegative (scale positive)")

    @classmethod
    def ar(cls, delta: float, order: int = 1) -> "DecayEnvelope":
        """c·(1−δ)^{|i−j|/N}, the envelope of an AR(N) model with margin δ.

        c = max(1/δ, 1/(1 − (1−δ)^{2/N})), which is 1/δ for N ≤ 2.
        """
        rho = (1 - delta) ** (1 / order)
        return cls("geometric", c=max(1 / delta, 1 / (1 - rho * rho)), rho=rho)

    @classmethod
    def from_config(cls, data: dict[str, Any]) -> "DecayEnvelope":
        try:
            return cls(
                data["kind"],
                c=float(data.get("c", 0.0)),
                rho=float(data.get("rho", 0.0)),
                scale=float(data.get("scale", 1.0)),
            )
        except DomainError as e:
            raise ConfigError(str(e))

    def __call__(self, d: np.ndarray | int) -> np.ndarray:
        d = np.abs(np.asarray(d, dtype=float))
        if self.kind == "zero":
            return np.zeros_like(d)
        if self.kind == "diagonal":
            return np.where(d == 0, self.c, 0.0)
        if self.kind == "gaussian":
            return self.c * np.exp(-(d**2) / self.scale)
        return self.c * np.power(self.rho, d)

    def majorant(self) -> tuple[float, float]:
        """(a, ρ) with g_0 at distance t ≤ a·ρ^t for every t."""
        if self.kind == "zero":
            return 0.0, 0.0
        if self.kind == "diagonal":
            return self.c, 0.0
        if self.kind == "gaussian":
            # exp(−t²/V) ≤ exp(V/4)·e^{−t}
            return self.c * math.exp(self.scale / 4), math.exp(-1.0)
        return self.c, self.rho


@dataclass
class DecayTable:
    """g_0..g_4 on a K×K table with weighted sums and tail majorants."""

    K: int
    eps: float
    envelope: DecayEnvelope
    levels: list[np.ndarray] = field(default_factory=list)
    weighted: list[np.ndarray] = field(default_factory=list)
    tail_max: list[float] = field(default_factory=list)
    constants: list[tuple[float, int]] = field(default_factory=list)
    rho: float = 0.0

    def status(self, n: int) -> str:
        """"finite", "infinite" (divergent envelope) or "overflow" for level n."""
        values = [self.levels[n], self.weighted[n]]
        if all(np.all(np.isfinite(v)) for v in values):
            return "finite"
        return "infinite" if self.rho >= 1 else "overflow"

    @property
    def statuses(self) -> list[str]:
        return [self.status(n) for n in range(len(self.levels))]

    @property
    def finite(self) -> bool:
        return all(s == "finite" for s in self.statuses)

    def monotone(self, tol: float = 0.0) -> bool:
        """g_{n+1} ≥ g_n ≥ 0 on every tabulated pair."""
        if any(np.any(g < -tol) for g in self.levels):
            return False
        return all(
            np.all(self.levels[n + 1] >= self.levels[n] - tol)
            for n in range(len(self.levels) - 1)
        )

    def rows(self) -> list[dict[str, Any]]:
        return [
            {
                "level": n,
                "status": self.status(n),
                "max_g": float(np.max(self.levels[n])),
                "max_weighted_sum": float(np.max(self.weighted[n])),
                "tail_max": self.tail_max[n],
                "a": self.constants[n][0],
                "p": self.constants[n][1],
            }
            for n in range(len(self.levels))
        ]


def validate_envelope(
    m: CovarianceModel, envelope: DecayEnvelope, probe: int = 40, rtol: float = 1e-12
) -> None:
    """Check |cov(i, j)| ≤ g_0(i, j) for all i, j ≤ probe."""
    sigma = m.leading(probe)
    idx = np.arange(probe)
    bound = envelope(idx[:, None] - idx[None, :])
    excess = np.abs(sigma) - bound * (1 + rtol)
    if np.any(excess > rtol):
        i, j = np.unravel_index(int(np.argmax(excess)), excess.shape)
        raise DomainError(
            f"envelope violated at pair ({i + 1}, {j + 1}): "
            f"|cov| = {abs(sigma[i, j]):.6g} > g_0 = {bound[i, j]:.6g}"
        )


def g_recursion(
    m: CovarianceModel | None,
    envelope: DecayEnvelope,
    K: int = 200,
    eps: float = 0.5,
    probe: int = 40,
) -> DecayTable:
    """Tabulate g_0..g_4 on i, j ≤ K with certified tails and weighted sums.

    Args:
        m: model whose covariances the envelope must dominate (None skips
            the check and runs the bare recursion).
        envelope: g_0.
        K: table cutoff.
        eps: exponent of the weighted sums Σ_k g_n(i, k) k^eps.
        probe: leading block size used to validate the envelope.
    """
    if K < 2:
        raise DomainError(f"table cutoff K must be >= 2, got {K}")
    if m is not None:
        validate_envelope(m, envelope, min(probe, K))

    idx = np.arange(1, K + 1)
    a, rho = envelope.majorant()
    p = 0
    g = envelope(idx[:, None] - idx[None, :])
    table = DecayTable(K=K, eps=eps, envelope=envelope, rho=rho)

    def weighted(g: np.ndarray, a: float, p: int) -> np.ndarray:
        head = g @ (idx.astype(float) ** eps)
        tail = np.array(
            [a * float(i) ** eps * power_geometric_sum(p + eps, rho, K + 1 - int(i)) if a else 0.0
             for i in idx]
        )
        return head + tail

    with np.errstate(over="ignore", invalid="ignore"):
        table.levels.append(g)
        table.weighted.append(weighted(g, a, p))
        table.constants.append((a, p))
        table.tail_max.append(0.0)
        for _ in range(LEVELS):
            # Σ_{k>K} E(k−i)E(k−j) ≤ a² S(2p, ρ², 0) · v_i v_j, v_i = (1+u)^p ρ^u, u = K+1−i
            if a == 0.0:
                tail = np.zeros((K, K))
            else:
                u = (K + 1 - idx).astype(float)
                v = (1 + u) ** p * np.power(rho, u)
                tail = a * a * power_geometric_sum(2 * p, rho * rho, 0) * np.outer(v, v)
            g = g + g @ g + tail
            a = a + a * a * (1 + 2 * power_geometric_sum(2 * p, rho * rho, 1)) if a else 0.0
            p = 2 * p + 1
            table.levels.append(g)
            table.weighted.append(weighted(g, a, p))
            table.constants.append((a, p))
            table.tail_max.append(float(np.max(tail)))

    logger.debug("g recursion K=%d eps=%s: %s", K, eps, table.statuses)
    return table


# Shell sums stop once a term drops below this and terms shrink by half or more.
SHELL_TAIL = 1e-30
MAX_SHELLS = 1_000_000


def lattice_moment(kernel: LatticeKernel, q: float, box: int = 8) -> float:
    """Upper bound on Σ_{t∈ℤ^d} exp(−‖t‖^α/V) (1 + ‖t‖_∞)^q.

    Points with ‖t‖_∞ ≤ box are summed exactly. Shell r beyond the box has
    (2r+1)^d − (2r−1)^d points, each with ‖t‖ ≥ r.
    """
    d = kernel.dimension
    axes = np.arange(-box, box + 1, dtype=float)
    grid = np.stack(np.meshgrid(*([axes] * d), indexing="ij"), axis=-1).reshape(-1, d)
    dist = np.sqrt(np.sum(grid**2, axis=1))
    sup = np.max(np.abs(grid), axis=1)
    total = float(np.sum(np.exp(-(dist**kernel.alpha) / kernel.scale) * (1 + sup) ** q))

    previous = math.inf
    for r in range(box + 1, box + MAX_SHELLS):
        count = (2 * r + 1) ** d - (2 * r - 1) ** d
        term = count * math.exp(-(r**kernel.alpha) / kernel.scale) * (1 + r) ** q
        total += term
        if term < SHELL_TAIL and term <= previous / 2:
            # later terms shrink at least geometrically from here
            return total + term
        previous = term
    return math.inf


@dataclass
class LatticeMoments:
    """Bounds on M_n(q) = Σ_t G_n(t)(1 + ‖t‖_∞)^q for a lattice kernel.

    g_n(i, j) = G_n(c(j) − c(i)) is translation invariant, the recursion
    becomes G_{n+1} = G_n + G_n * G_n and the weight is submultiplicative,
    so M_{n+1} ≤ M_n + M_n². A finite M_n(d·eps) bounds
    Σ_k g_n(i, k) k^eps by (2(1 + ‖c(i)‖_∞))^{d·eps} M_n(d·eps).
    """

    eps: float
    q: float
    mass: list[float] = field(default_factory=list)
    moments: list[float] = field(default_factory=list)

    def status(self, n: int) -> str:
        if math.isfinite(self.mass[n]) and math.isfinite(self.moments[n]):
            return "finite"
        return "overflow"

    @property
    def statuses(self) -> list[str]:
        return [self.status(n) for n in range(len(self.moments))]

    @property
    def finite(self) -> bool:
        return all(s == "finite" for s in self.statuses)

    def rows(self) -> list[dict[str, Any]]:
        return [
            {"level": n, "status": self.status(n), "mass": self.mass[n], "moment": self.moments[n]}
            for n in range(len(self.moments))
        ]


def lattice_g_moments(kernel: LatticeKernel, eps: float = 0.5) -> LatticeMoments:
    """Run the moment form of the g_n recursion for g_0 = the lattice kernel."""
    if eps < 0:
        raise DomainError(f"weight exponent must be non-negative, got {eps}")
    q = kernel.dimension * eps
    result = LatticeMoments(eps=eps, q=q)
    mass, moment = lattice_moment(kernel, 0.0), lattice_moment(kernel, q)
    with np.errstate(over="ignore"):
        for _ in range(LEVELS + 1):
            result.mass.append(mass)
            result.moments.append(moment)
            mass = mass + mass * mass
            moment = moment + moment * moment
    logger.debug("lattice moments d=%d eps=%s: %s", kernel.dimension, eps, result.moments)
    return result
