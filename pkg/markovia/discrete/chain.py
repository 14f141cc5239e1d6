"""Inhomogeneous two-state Markov chains.

p_n = P(X_{n+1} = 1 | X_n = 1) and t_n = P(X_{n+1} = 1 | X_n = 0). The
sequences are stored as finite tuples; past their end the last value
repeats.
"""

import itertools
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from ..config import DEFAULT_SETTINGS, Settings
from ..errors import ConfigError, DomainError, SizeError
from ..log import get_logger

logger = get_logger(__name__)


def _open_unit(name: str, value: float) -> float:
    value = float(value)
    if not 0 < value < 1:
        raise DomainError(f"{name} must lie in (0, 1), got {value}")
    return value


@dataclass(frozen=True)
class MarkovChainSpec:
    """Initial probability π₁ = P(X₁ = 1) and transition sequences p, t."""

    pi1: float
    p: tuple[float, ...]
    t: tuple[float, ...]

    def __post_init__(self):
        _open_unit("pi1", self.pi1)
        if not self.p or not self.t:
            raise DomainError("p and t need at least one value each")
        for k, value in enumerate(self.p, start=1):
            _open_unit(f"p_{k}", value)
        for k, value in enumerate(self.t, start=1):
            _open_unit(f"t_{k}", value)

    @classmethod
    def homogeneous(cls, pi1: float, p: float, t: float) -> "MarkovChainSpec":
        return cls(float(pi1), (float(p),), (float(t),))

    def p_at(self, n: int) -> float:
        if n < 1:
            raise DomainError(f"transition index must be positive, got {n}")
        return self.p[min(n, len(self.p)) - 1]

    def t_at(self, n: int) -> float:
        if n < 1:
            raise DomainError(f"transition index must be positive, got {n}")
        return self.t[min(n, len(self.t)) - 1]

    def gap(self, n: int) -> float:
        """p_n − t_n."""
        return self.p_at(n) - self.t_at(n)

    def divergence_sums(self, n: int) -> list[float]:
        """Running partial sums Σ_{k≤r} (1 − (p_k − t_k)) for r = 1..n."""
        return list(itertools.accumulate(1 - self.gap(k) for k in range(1, n + 1)))

    def to_dict(self) -> dict[str, Any]:
        return {"pi1": self.pi1, "p": list(self.p), "t": list(self.t)}


def _sequence(name: str, value: Any) -> tuple[float, ...]:
    if isinstance(value, (int, float)):
        return (float(value),)
    if isinstance(value, list) and value:
        return tuple(float(v) for v in value)
    raise ConfigError(f"chain config {name!r} must be a number or a non-empty list")


def chain_from_config(data: dict[str, Any]) -> MarkovChainSpec:
    """Build a spec from a validated chain config."""
    try:
        return MarkovChainSpec(
            float(data["pi1"]), _sequence("p", data["p"]), _sequence("t", data["t"])
        )
    except KeyError as e:
        raise ConfigError(f"chain config is missing {e.args[0]!r}")
    except DomainError as e:
        raise ConfigError(str(e))


def random_chain_spec(
    rng: np.random.Generator, length: int, low: float = 0.05, high: float = 0.95
) -> MarkovChainSpec:
    """π₁, p_n and t_n drawn uniformly from [low, high]."""
    if not 0 < low < high < 1:
        raise DomainError(f"need 0 < low < high < 1, got {low}, {high}")
    return MarkovChainSpec(
        float(rng.uniform(low, high)),
        tuple(float(x) for x in rng.uniform(low, high, size=length)),
        tuple(float(x) for x in rng.uniform(low, high, size=length)),
    )


def chain_marginal(c: MarkovChainSpec, n: int) -> float:
    """π_n = P(X_n = 1) by the forward recursion π_{k+1} = p_k π_k + t_k (1 − π_k)."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    pi = c.pi1
    for k in range(1, n):
        pi = c.p_at(k) * pi + c.t_at(k) * (1 - pi)
    return pi


def chain_pmf(
    c: MarkovChainSpec, n: int, settings: Settings = DEFAULT_SETTINGS
) -> np.ndarray:
    """Exact pmf of (X_1..X_n); bit k − 1 of the state index is x_k."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    if n > settings.enumeration_cap:
        raise SizeError("chain enumeration", n, settings.enumeration_cap)
    states = np.arange(2**n, dtype=np.int64)
    bits = [((states >> k) & 1).astype(bool) for k in range(n)]
    log_p = np.where(bits[0], math.log(c.pi1), math.log1p(-c.pi1))
    for k in range(1, n):
        up = np.where(bits[k - 1], c.p_at(k), c.t_at(k))
        log_p = log_p + np.where(bits[k], np.log(up), np.log1p(-up))
    logger.debug("chain pmf over %d states", 2**n)
    return np.exp(log_p)
