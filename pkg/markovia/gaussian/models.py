"""Covariance models over ℕ-indexed Gaussian processes.

Every model exposes cov(i, j) for 1-based indices and dense blocks through
matrix(indices). Models are immutable and safe to share across threads.
"""

import math
from abc import ABC, abstractmethod
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, ClassVar

import numpy as np
import scipy.integrate
import scipy.linalg

from ..errors import ConfigError, DomainError
from ..graph import lattice_coordinate
from .linalg import as_symmetric


class CovarianceModel(ABC):
    """A rule producing cov(X_i, X_j) for any pair of indices."""

    variant: ClassVar[str] = "abstract"

    @abstractmethod
    def cov(self, i: int, j: int) -> float: ...

    def _check_index(self, i: int) -> None:
        if i < 1:
            raise DomainError(f"{self.variant}: index {i} is not a natural number")

    def matrix(self, indices: Sequence[int]) -> np.ndarray:
        """Dense covariance block Σ_indices."""
        idx = list(indices)
        for i in idx:
            self._check_index(i)
        out = np.empty((len(idx), len(idx)))
        for p, i in enumerate(idx):
            for q in range(p, len(idx)):
                out[p, q] = out[q, p] = self.cov(i, idx[q])
        return out

    def leading(self, size: int) -> np.ndarray:
        """Leading principal block Σ_{1..size}."""
        return self.matrix(range(1, size + 1))


def covariance(m: CovarianceModel, i: int, j: int) -> float:
    return m.cov(i, j)


@dataclass(frozen=True)
class ExplicitCovariance(CovarianceModel):
    """A fixed finite matrix indexed 1..n."""

    variant: ClassVar[str] = "explicit"
    values: tuple[tuple[float, ...], ...]

    @classmethod
    def from_matrix(cls, matrix: Any) -> "ExplicitCovariance":
        m = as_symmetric(matrix)
        return cls(tuple(tuple(float(x) for x in row) for row in m))

    @property
    def size(self) -> int:
        return len(self.values)

    def _check_index(self, i: int) -> None:
        if not 1 <= i <= self.size:
            raise DomainError(f"index {i} outside explicit matrix of size {self.size}")

    def cov(self, i: int, j: int) -> float:
        self._check_index(i)
        self._check_index(j)
        return self.values[i - 1][j - 1]

    def matrix(self, indices: Sequence[int]) -> np.ndarray:
        idx = [i - 1 for i in indices]
        for i in indices:
            self._check_index(i)
        return np.array(self.values)[np.ix_(idx, idx)]


@dataclass(frozen=True)
class IndependentCovariance(CovarianceModel):
    """Independent coordinates with a common variance."""

    variant: ClassVar[str] = "identity"
    variance: float = 1.0

    def cov(self, i: int, j: int) -> float:
        self._check_index(i)
        self._check_index(j)
        return self.variance if i == j else 0.0

    def matrix(self, indices: Sequence[int]) -> np.ndarray:
        for i in indices:
            self._check_index(i)
        return self.variance * np.eye(len(indices))


@lru_cache(maxsize=32)
def _ar_blocks(model: "ARCovariance", size: int) -> tuple[np.ndarray, np.ndarray]:
    """(Σ, L) for the leading block, with L = I − B and Σ = L^{-1} L^{-T}."""
    lower = np.eye(size)
    for n in range(2, size + 1):
        row = model.row(n)
        for j, beta in enumerate(row, start=1):
            if n - j >= 1:
                lower[n - 1, n - 1 - j] = -beta
    inv = scipy.linalg.solve_triangular(lower, np.eye(size), lower=True)
    sigma = inv @ inv.T
    return (sigma + sigma.T) / 2, lower


@dataclass(frozen=True)
class ARCovariance(CovarianceModel):
    """X_n = Σ_{j=1}^{N} β_{nj} X_{n−j} + ε_n with standard normal innovations.

    `coefficients` holds one row (β_{n1}, ..., β_{nN}) per n starting at
    n = 1; the last row repeats for larger n. A single row gives a
    stationary recursion. Validation requires Σ_j |β_{nj}| < 1 − δ.
    """

    variant: ClassVar[str] = "ar"
    coefficients: tuple[tuple[float, ...], ...]
    delta: float

    def __post_init__(self):
        if not self.coefficients or not self.coefficients[0]:
            raise DomainError("AR model needs at least one coefficient")
        order = len(self.coefficients[0])
        if any(len(row) != order for row in self.coefficients):
            raise DomainError("AR coefficient rows must share the same order")
        if not self.delta > 0:
            raise DomainError(f"AR margin δ must be positive, got {self.delta}")
        for n, row in enumerate(self.coefficients, start=1):
            mass = sum(abs(b) for b in row)
            if not mass < 1 - self.delta:
                raise DomainError(
                    f"AR row {n}: Σ|β| = {mass:.6g} is not below 1 − δ = {1 - self.delta:.6g}"
                )

    @classmethod
    def stationary(cls, betas: Sequence[float], delta: float) -> "ARCovariance":
        return cls((tuple(float(b) for b in betas),), delta)

    @property
    def order(self) -> int:
        return len(self.coefficients[0])

    def row(self, n: int) -> tuple[float, ...]:
        return self.coefficients[min(n, len(self.coefficients)) - 1]

    def cov(self, i: int, j: int) -> float:
        self._check_index(i)
        self._check_index(j)
        sigma, _ = _ar_blocks(self, max(i, j))
        return float(sigma[i - 1, j - 1])

    def matrix(self, indices: Sequence[int]) -> np.ndarray:
        idx = list(indices)
        for i in idx:
            self._check_index(i)
        if not idx:
            return np.zeros((0, 0))
        sigma, _ = _ar_blocks(self, max(idx))
        pos = [i - 1 for i in idx]
        return sigma[np.ix_(pos, pos)]

    def exact_precision(self, size: int) -> np.ndarray:
        """Banded precision (I − B)^T (I − B) of the leading block."""
        _, lower = _ar_blocks(self, size)
        return lower.T @ lower

    def variance_bound(self, n: int) -> float:
        """Σ_{k<n} (1−δ)^{2⌈k/N⌉}, a bound on var(X_n).

        The response of X_n to ε_{n−k} is at most (1−δ)^{⌈k/N⌉} in absolute
        value. It can exceed 1/δ when N ≥ 2; var(X_n) ≤ 1/δ holds for every
        N because Σ|ψ_k| ≤ 1/δ and |ψ_k| ≤ 1.
        """
        r = (1 - self.delta) ** 2
        return float(sum(r ** (-(-k // self.order)) for k in range(n)))


@dataclass(frozen=True)
class LatticeKernel(CovarianceModel):
    """Stationary kernel exp(−d(c(i), c(j))^α / V) on ℤ^d reindexed to ℕ."""

    variant: ClassVar[str] = "lattice"
    dimension: int = 2
    alpha: float = 2.0
    scale: float = 1.0
    coordinate: Callable[[int, int], tuple[int, ...]] = field(
        default=lattice_coordinate, repr=False, compare=False
    )

    def __post_init__(self):
        if self.dimension < 1:
            raise DomainError(f"lattice dimension must be >= 1, got {self.dimension}")
        if not 0 < self.alpha <= 2:
            raise DomainError(f"kernel exponent must lie in (0, 2], got {self.alpha}")
        if not self.scale > 0:
            raise DomainError(f"kernel scale must be positive, got {self.scale}")

    def distance(self, i: int, j: int) -> float:
        ci = np.array(self.coordinate(i, self.dimension))
        cj = np.array(self.coordinate(j, self.dimension))
        return float(np.linalg.norm(ci - cj))

    def cov(self, i: int, j: int) -> float:
        self._check_index(i)
        self._check_index(j)
        if i == j:
            return 1.0
        return math.exp(-(self.distance(i, j) ** self.alpha) / self.scale)

    def matrix(self, indices: Sequence[int]) -> np.ndarray:
        idx = list(indices)
        for i in idx:
            self._check_index(i)
        coords = np.array([self.coordinate(i, self.dimension) for i in idx], dtype=float)
        if not idx:
            return np.zeros((0, 0))
        diff = coords[:, None, :] - coords[None, :, :]
        dist = np.sqrt(np.sum(diff**2, axis=-1))
        return np.exp(-(dist**self.alpha) / self.scale)

    @property
    def separable(self) -> bool:
        """Squared-exponential kernels factor over coordinates."""
        return self.alpha == 2.0


@dataclass(frozen=True)
class DiagDominantCovariance(CovarianceModel):
    """Entries with |σ_ii| > ε + Σ_{j≠i} |σ_ij| and |σ_ii| ≤ C.

    The dominance is validated on `probe_rows` rows, each summed over the
    first `probe_width` columns; it is evidence, not a proof, for infinite rows.
    """

    variant: ClassVar[str] = "diag-dominant"
    entries: Callable[[int, int], float] = field(repr=False)
    epsilon: float = 0.0
    cap: float = 1.0
    probe_rows: int = 50
    probe_width: int = 400
    row_sums: Callable[[int], float] | None = field(default=None, repr=False)

    def __post_init__(self):
        if not self.epsilon > 0:
            raise DomainError(f"dominance margin ε must be positive, got {self.epsilon}")
        for i in range(1, self.probe_rows + 1):
            diag = abs(self.entries(i, i))
            if self.row_sums is not None:
                off = self.row_sums(i)
            else:
                off = sum(
                    abs(self.entries(i, j))
                    for j in range(1, self.probe_width + 1)
                    if j != i
                )
            if not diag > self.epsilon + off:
                raise DomainError(
                    f"row {i} is not dominant: |σ_ii| = {diag:.6g}, "
                    f"ε + Σ|σ_ij| = {self.epsilon + off:.6g}"
                )
            if diag > self.cap:
                raise DomainError(f"row {i}: |σ_ii| = {diag:.6g} exceeds cap {self.cap}")

    def cov(self, i: int, j: int) -> float:
        self._check_index(i)
        self._check_index(j)
        return float(self.entries(min(i, j), max(i, j)))

    def gershgorin_bounds(self) -> tuple[float, float]:
        """Floor ε and ceiling 2C on every eigenvalue of every finite block."""
        return self.epsilon, 2 * self.cap

    @classmethod
    def from_lattice(cls, kernel: LatticeKernel) -> "DiagDominantCovariance":
        """Wrap a lattice kernel whose certified dominance margin is positive."""
        margin = dominance_margin(kernel.dimension, kernel.alpha, kernel.scale)
        if margin <= 0:
            raise DomainError(
                f"lattice kernel (d={kernel.dimension}, α={kernel.alpha}, "
                f"V={kernel.scale}) is not diagonally dominant (margin {margin:.3g})"
            )
        # Every row of a stationary kernel has the same off-diagonal mass,
        # at most 1 − margin; dominance is strict, so half the margin is kept.
        return cls(
            kernel.cov,
            epsilon=margin / 2,
            cap=1.0,
            probe_rows=1,
            row_sums=lambda i: 1.0 - margin,
        )


@dataclass(frozen=True)
class MovingAverageCovariance(CovarianceModel):
    """A_1 = B_1, A_n = B_n + αB_{n−1} with i.i.d. standard normal B."""

    variant: ClassVar[str] = "ma1"
    alpha: float = 0.5

    def cov(self, i: int, j: int) -> float:
        self._check_index(i)
        self._check_index(j)
        if i == j:
            return 1.0 if i == 1 else 1.0 + self.alpha**2
        if abs(i - j) == 1:
            return self.alpha
        return 0.0


def ma_precision_entry(alpha: float, n: int, i: int, k: int) -> float:
    """Closed-form (Σ_n^{-1})_{ik} = (−α)^{|i−k|} Σ_{r=0}^{n−max(i,k)} α^{2r}."""
    if not (1 <= i <= n and 1 <= k <= n):
        raise DomainError(f"entry ({i}, {k}) outside a block of size {n}")
    terms = n - max(i, k) + 1
    return (-alpha) ** abs(i - k) * sum(alpha ** (2 * r) for r in range(terms))


def dominance_margin(d: int, alpha: float, scale: float, max_shell: int = 1_000_000) -> float:
    """Certified 1 − Σ_{q≠0} exp(−‖q‖^α / V) for the lattice kernel.

    Shell r of the max-norm has (2r+1)^d − (2r−1)^d points, each at Euclidean
    distance ≥ r. Shells are summed until the shell term is decreasing and
    negligible; the remainder is bounded by an integral.
    """

    def shell_count(r: float) -> float:
        return (2 * r + 1) ** d - (2 * r - 1) ** d

    def term(r: float) -> float:
        return shell_count(r) * math.exp(-(r**alpha) / scale)

    # Past this radius the bound 2d(2r+1)^{d−1} e^{−r^α/V} is decreasing.
    def envelope(x: float) -> float:
        return 2 * d * (2 * x + 1) ** (d - 1) * math.exp(-(x**alpha) / scale)

    total = 0.0
    r = 1
    while True:
        t = term(r)
        total += t
        slope = 2 * (d - 1) / (2 * r + 1) - (alpha / scale) * r ** (alpha - 1)
        if slope < 0 and envelope(r) < 1e-17:
            break
        r += 1
        if r > max_shell:
            raise DomainError("dominance margin series did not settle")
    tail, err = scipy.integrate.quad(envelope, r, np.inf)
    return 1.0 - total - tail - abs(err)


def model_from_config(data: dict[str, Any]) -> CovarianceModel:
    """Build a covariance model from a validated covariance config."""
    variant = data["variant"]
    try:
        if variant == "explicit":
            return ExplicitCovariance.from_matrix(data["matrix"])
        if variant == "identity":
            return IndependentCovariance()
        if variant == "ar":
            coeffs = data["coefficients"]
            if coeffs and isinstance(coeffs[0], (int, float)):
                coeffs = [coeffs]
            return ARCovariance(
                tuple(tuple(float(b) for b in row) for row in coeffs), float(data["delta"])
            )
        if variant == "lattice":
            return LatticeKernel(
                int(data.get("dimension", 2)),
                float(data.get("alpha", 2.0)),
                float(data["scale"]),
            )
        if variant == "diag-dominant":
            return DiagDominantCovariance.from_lattice(
                LatticeKernel(
                    int(data.get("dimension", 2)),
                    float(data.get("alpha", 1.0)),
                    float(data["scale"]),
                )
            )
        if variant == "ma1":
            return MovingAverageCovariance(float(data["alpha"]))
    except KeyError as e:
        raise ConfigError(f"{variant} covariance config is missing {e.args[0]!r}")
    raise ConfigError(f"unknown covariance variant {variant!r}")
