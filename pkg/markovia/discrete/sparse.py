"""Certified partial normalizers and conditional floors for sparse Ising models.

In the sparse regime every pairwise θ is nonpositive and θ_k0 ≤ −2 log k, so
U(x) ≤ Π_{k∈S} e^{θ_k0} for a configuration with support S. Summing over
finite supports gives Σ_x U(x) ≤ Π_k (1 + e^{θ_k0}) ≤ exp(Σ_k e^{θ_k0}).
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError, SizeError
from ..log import get_logger
from .ising import IsingModel, Regime

logger = get_logger(__name__)

COMBINATION_CAP = 2_000_000


@dataclass(frozen=True)
class PartialNormalizer:
    """Z_{s,K} over supports of size ≤ s inside 1..K, plus a bound on the rest."""

    value: float
    tail: float
    support_cap: int
    index_cap: int
    terms: int

    @property
    def upper(self) -> float:
        return self.value + self.tail

    def contains(self, z: float) -> bool:
        """True when z lies in [value, value + tail]."""
        return self.value <= z <= self.upper


def _combination_count(K: int, s: int) -> int:
    return sum(math.comb(K, r) for r in range(min(s, K) + 1))


def sparse_ising_normalize(m: IsingModel, s: int, K: int) -> PartialNormalizer:
    """Sum U(x) over configurations with at most s ones, all at indices ≤ K.

    The tail bound covers the two kinds of missing configurations. With
    C = Σ_{k≤K} e^{θ_k0} + 1/K:
      - more than s ones inside 1..K: at most e^C − Σ_{r≤s} C^r / r!
      - a one beyond K: at most (Σ_{k>K} k^{−2}) e^C ≤ e^C / K

    Raises:
        DomainError: the model is not in the sparse regime, or s, K < 0.
        SizeError: the number of supports exceeds COMBINATION_CAP.
    """
    if m.regime is not Regime.SPARSE:
        raise DomainError(f"{m.name}: partial normalizers need the sparse regime")
    if s < 0 or K < 1:
        raise DomainError(f"need s ≥ 0 and K ≥ 1, got s={s}, K={K}")
    count = _combination_count(K, s)
    if count > COMBINATION_CAP:
        raise SizeError("sparse normalizer supports", count, COMBINATION_CAP)

    J, h = m.arrays(K)
    J = J + J.T
    terms = [1.0]
    for r in range(1, min(s, K) + 1):
        for support in itertools.combinations(range(K), r):
            idx = np.array(support)
            log_u = h[idx].sum() + J[np.ix_(idx, idx)].sum() / 2
            terms.append(math.exp(log_u))
    value = math.fsum(terms)

    c = math.fsum(math.exp(m.field_at(k)) for k in range(1, K + 1)) + 1 / K
    partial = math.fsum(c**r / math.factorial(r) for r in range(s + 1))
    tail = max(0.0, math.exp(c) - partial) + math.exp(c) / K

    logger.debug("%s: Z_{%d,%d} = %.12g over %d supports, tail %.3g", m.name, s, K, value, len(terms), tail)
    return PartialNormalizer(value=value, tail=tail, support_cap=s, index_cap=K, terms=len(terms))


def prefix_conditional_floor(m: IsingModel, mm: int) -> float:
    """ε_m = exp(−Σ|θ| over edges touching 1..mm) / 2^mm.

    Every conditional P(X_{1..mm} = v | X_B = x_B) of every truncation is at
    least ε_m: the weights of two prefixes differ by at most that mass.
    """
    if mm < 1:
        raise DomainError(f"prefix length must be positive, got {mm}")
    if m.size is not None and mm > m.size:
        raise DomainError(f"{m.name} has only {m.size} nodes")
    mass = 0.0
    for i in range(1, mm + 1):
        mass += abs(m.field_at(i))
        for j in m.pair_neighbors(i):
            # Edges inside the prefix are counted from their lower end.
            if j > i:
                mass += abs(m.coupling(i, j))
    return math.exp(-mass) / 2**mm
