"""Exact decorrelation diagnostics on finite truncations.

For a tail event A over coordinates ≥ n′ the diagnostic is

    Var(P(A | X_1..X_m, X_B) | X_B = x_B),

which vanishes as n′ grows when the process decorrelates. Events are
boolean masks over the 2^N states of the truncation (bit k − 1 is x_k).
"""

from collections.abc import Callable, Iterable, Mapping, Sequence
from typing import Any

import numpy as np

from ..config import DEFAULT_SETTINGS, Settings
from ..errors import DomainError
from ..graphoid.relation import check_pmf, pmf_size
from ..log import get_logger
from ..parallel import ordered_map
from ..report import DiagnosticReport
from .chain import MarkovChainSpec, chain_pmf

logger = get_logger(__name__)


def _states(n: int) -> np.ndarray:
    return np.arange(2**n, dtype=np.int64)


def _bit(states: np.ndarray, i: int) -> np.ndarray:
    return (states >> (i - 1)) & 1


def _condition_mask(n: int, b: Sequence[int], x_b: Sequence[int]) -> np.ndarray:
    if len(b) != len(x_b):
        raise DomainError(f"{len(b)} conditioning coordinates but {len(x_b)} values")
    states = _states(n)
    mask = np.ones(2**n, dtype=bool)
    for i, x in zip(b, x_b):
        if not 1 <= i <= n:
            raise DomainError(f"coordinate {i} is outside 1..{n}")
        if x not in (0, 1):
            raise DomainError(f"value {x!r} of coordinate {i} is not binary")
        mask &= _bit(states, i) == x
    return mask


def cylinder_event(n: int, values: Mapping[int, int]) -> np.ndarray:
    """Mask of {X_i = values[i] for every listed i}."""
    keys = sorted(values)
    return _condition_mask(n, keys, [values[i] for i in keys])


def random_tail_event(n: int, n_prime: int, rng: np.random.Generator) -> np.ndarray:
    """A uniformly random event measurable with respect to X_{n′..n}."""
    if not 1 <= n_prime <= n:
        raise DomainError(f"need 1 ≤ n′ ≤ {n}, got {n_prime}")
    table = rng.random(2 ** (n - n_prime + 1)) < 0.5
    return table[_states(n) >> (n_prime - 1)]


def conditional_prefix(
    pmf: np.ndarray, mm: int, b: Sequence[int] = (), x_b: Sequence[int] = ()
) -> np.ndarray:
    """P(X_{1..mm} = v | X_B = x_B) for every v, indexed like a 2^mm pmf."""
    p = check_pmf(pmf)
    n = pmf_size(p)
    if not 1 <= mm <= n:
        raise DomainError(f"prefix length {mm} outside 1..{n}")
    weights = np.where(_condition_mask(n, b, x_b), p, 0.0)
    total = weights.sum()
    if total <= 0:
        raise DomainError("conditioning event has probability zero")
    prefix = _states(n) & (2**mm - 1)
    return np.bincount(prefix, weights=weights, minlength=2**mm) / total


def last_one_tail(
    pmf: np.ndarray, n: int, b: Sequence[int] = (), x_b: Sequence[int] = ()
) -> float:
    """P(some X_i = 1 with i ≥ n | X_B = x_B) on the truncation."""
    p = check_pmf(pmf)
    size = pmf_size(p)
    if not 1 <= n <= size:
        raise DomainError(f"need 1 ≤ n ≤ {size}, got {n}")
    cond = _condition_mask(size, b, x_b)
    total = p[cond].sum()
    if total <= 0:
        raise DomainError("conditioning event has probability zero")
    late = (_states(size) >> (n - 1)) != 0
    return float(p[cond & late].sum() / total)


def dcp_variance(
    pmf: np.ndarray,
    event: np.ndarray,
    m: int,
    b: Iterable[int] = (),
    x_b: Sequence[int] = (),
) -> float:
    """Var(P(A | X_1..X_m, X_B) | X_B = x_B) by exact summation.

    Args:
        pmf: flat table over {0,1}^N.
        event: boolean mask of A over the same states.
        m: prefix length.
        b: conditioning coordinates (1-based).
        x_b: their values, in the order of b.

    Raises:
        DomainError: P(X_B = x_B) = 0 or the inputs do not fit together.
    """
    p = check_pmf(pmf)
    n = pmf_size(p)
    event = np.asarray(event, dtype=bool)
    if event.shape != p.shape:
        raise DomainError(f"event mask has shape {event.shape}, expected {p.shape}")
    if not 1 <= m <= n:
        raise DomainError(f"prefix length {m} outside 1..{n}")
    weights = np.where(_condition_mask(n, list(b), list(x_b)), p, 0.0)
    total = weights.sum()
    if total <= 0:
        raise DomainError("conditioning event has probability zero")

    # Step 1: P(prefix = v | x_B) and P(A, prefix = v | x_B)
    prefix = _states(n) & (2**m - 1)
    w = np.bincount(prefix, weights=weights, minlength=2**m) / total
    a = np.bincount(prefix, weights=weights * event, minlength=2**m) / total

    # Step 2: variance of the conditional probability over the prefix
    seen = w > 0
    h = a[seen] / w[seen]
    mean = float(a.sum())
    return float(np.sum(w[seen] * (h - mean) ** 2))


def chain_dcp_bound(c: MarkovChainSpec, m: int, n_prime: int) -> float:
    """Π_{r=m}^{n′−2} |p_r − t_r|, which dominates dcp_variance when B ⊆ {1..m−1}."""
    if not 1 <= m < n_prime:
        raise DomainError(f"need 1 ≤ m < n′, got m={m}, n′={n_prime}")
    bound = 1.0
    for r in range(m, n_prime - 1):
        bound *= abs(c.gap(r))
    return bound


def dcp_trace(
    pmf: np.ndarray,
    m: int,
    n_primes: Iterable[int],
    b: Sequence[int] = (),
    x_b: Sequence[int] = (),
    event: Callable[[int, int], np.ndarray] | None = None,
) -> list[dict[str, Any]]:
    """dcp_variance for a family of tail events indexed by n′.

    `event(n, n′)` builds the mask; the default is {X_{n′} = 1}.
    """
    n = pmf_size(np.asarray(pmf))
    event = event or (lambda size, k: cylinder_event(size, {k: 1}))
    return [
        {"n_prime": k, "variance": dcp_variance(pmf, event(n, k), m, b, x_b)}
        for k in n_primes
    ]


def chain_dcp_trials(
    c: MarkovChainSpec,
    n: int,
    trials: int,
    rng: np.random.Generator,
    settings: Settings = DEFAULT_SETTINGS,
) -> list[dict[str, Any]]:
    """Random (m, n′, B, x_B, A) draws on the first n coordinates of a chain.

    Each row carries the exact variance and the product bound; B is drawn
    inside {1..m−1} and A as a random event over X_{n′..n}.
    """
    if n < 2:
        raise DomainError(f"need at least two coordinates, got {n}")
    pmf = chain_pmf(c, n, settings)
    draws = []
    for trial in range(trials):
        m = int(rng.integers(1, n))
        n_prime = int(rng.integers(m + 1, n + 1))
        pool = np.arange(1, m)
        b = sorted(int(i) for i in pool[rng.random(len(pool)) < 0.5])
        x_b = [int(x) for x in rng.integers(0, 2, size=len(b))]
        draws.append((trial, m, n_prime, b, x_b, random_tail_event(n, n_prime, rng)))

    def run(draw: tuple) -> dict[str, Any]:
        trial, m, n_prime, b, x_b, event = draw
        return {
            "trial": trial,
            "m": m,
            "n_prime": n_prime,
            "variance": dcp_variance(pmf, event, m, b, x_b),
            "bound": chain_dcp_bound(c, m, n_prime),
        }

    rows = ordered_map(run, draws, settings)
    logger.debug("chain dcp: %d trials on %d coordinates", trials, n)
    return rows


BOUND_SLACK = 1e-12


def chain_dcp_report(
    c: MarkovChainSpec,
    n: int,
    trials: int,
    rng: np.random.Generator,
    settings: Settings = DEFAULT_SETTINGS,
) -> DiagnosticReport:
    """Grade chain_dcp_trials: every variance must sit under its product bound."""
    rows = chain_dcp_trials(c, n, trials, rng, settings)
    report = DiagnosticReport(name="chain dcp", anchor="dcp.chain", tolerance=BOUND_SLACK)
    over = [r for r in rows if r["variance"] > r["bound"] + BOUND_SLACK]
    report.add(
        "variance ≤ Π|p_r − t_r|",
        not over,
        detail=f"{len(rows)} random (m, n′, B, A) draws on {n} coordinates",
        witnesses=[
            f"trial {r['trial']}: m={r['m']}, n′={r['n_prime']}, "
            f"variance {r['variance']:.3g} > {r['bound']:.3g}"
            for r in over[:20]
        ],
        max_variance=max((r["variance"] for r in rows), default=0.0),
    )
    sums = c.divergence_sums(n)
    report.notes.append(f"Σ_{{r≤{n}}} (1 − (p_r − t_r)) = {sums[-1]:.6g}")
    report.traces["dcp"] = rows
    logger.info("chain dcp on %d coordinates: %s", n, report.verdict.value)
    return report
