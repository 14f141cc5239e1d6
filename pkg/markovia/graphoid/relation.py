"""Ternary relations "A ⊥ B | C" and their construction from distributions."""

import math
from collections.abc import Callable, Iterable, Sequence
from typing import Any
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..config import DEFAULT_SETTINGS, Settings
from ..errors import ConfigError, DomainError, MarkoviaError, NumericError
from ..gaussian.linalg import as_symmetric, conditional_blocks
from ..graph import VertexSet, vertex_set
from .statements import CIStatement, fmt_set


class Provenance(Enum):
    """Where a relation's answers come from."""

    EXPLICIT = "explicit"
    DISCRETE = "discrete-distribution"
    GAUSSIAN = "gaussian"
    MIXTURE = "gaussian-mixture"


@dataclass(frozen=True, eq=False)
class CIRelation:
    """A relation over subsets of a finite ground set.

    `query` is the raw backend; `holds` canonicalizes and memoizes, so the
    two orientations of a statement always agree.
    """

    ground_set: VertexSet
    query: Callable[[CIStatement], bool] = field(repr=False)
    provenance: Provenance = Provenance.EXPLICIT
    name: str = "relation"
    # Dependence magnitude for reporting; None when the backend has none.
    magnitude: Callable[[CIStatement], float] | None = field(default=None, repr=False)
    _memo: dict[CIStatement, bool] = field(default_factory=dict, repr=False)

    def _check(self, st: CIStatement) -> None:
        outside = set(st.support) - set(self.ground_set)
        if outside:
            raise DomainError(f"{st} uses vertices {sorted(outside)} outside {self.name}")

    def statement(self, a: Iterable[int], b: Iterable[int], c: Iterable[int] = ()) -> CIStatement:
        st = CIStatement(vertex_set(a), vertex_set(b), vertex_set(c))
        self._check(st)
        return st

    def holds(self, a: Iterable[int], b: Iterable[int], c: Iterable[int] = ()) -> bool:
        return self.holds_statement(self.statement(a, b, c))

    def holds_statement(self, st: CIStatement) -> bool:
        st = st.canonical()
        cached = self._memo.get(st)
        if cached is None:
            self._check(st)
            cached = bool(self.query(st))
            self._memo[st] = cached
        return cached

    def __contains__(self, st: CIStatement) -> bool:
        return self.holds_statement(st)

    def dependence(self, a: Iterable[int], b: Iterable[int], c: Iterable[int] = ()) -> float | None:
        if self.magnitude is None:
            return None
        return float(self.magnitude(self.statement(a, b, c).canonical()))


def explicit_relation(
    ground_set: Iterable[int], statements: Iterable[CIStatement | Sequence[Iterable[int]]]
) -> CIRelation:
    """Relation backed by a finite statement store."""
    ground = vertex_set(ground_set)
    store: set[CIStatement] = set()
    for item in statements:
        st = item if isinstance(item, CIStatement) else CIStatement(*map(vertex_set, item))
        store.add(st.canonical())
    relation = CIRelation(
        ground, lambda st: st.canonical() in store, Provenance.EXPLICIT, name="explicit"
    )
    for st in store:
        relation._check(st)
    return relation


# -- discrete distributions over {0,1}^n --------------------------------------
#
# A pmf is a flat array of length 2^n; bit k of the state index is the value
# of the k-th variable. Reshaping in Fortran order gives a tensor whose axis k
# is that variable.


def pmf_size(pmf: np.ndarray) -> int:
    n = int(round(math.log2(len(pmf)))) if len(pmf) else -1
    if n < 1 or 2**n != len(pmf):
        raise DomainError(f"pmf length {len(pmf)} is not a power of two")
    return n


def check_pmf(pmf: Sequence[float] | np.ndarray, atol: float = 1e-12) -> np.ndarray:
    """Validate nonnegativity and normalization; return a float array."""
    p = np.asarray(pmf, dtype=float).ravel()
    pmf_size(p)
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise DomainError("pmf has negative or non-finite entries")
    total = float(p.sum())
    if abs(total - 1.0) > atol:
        raise DomainError(f"pmf sums to {total!r}, not 1")
    return p


def pmf_tensor(pmf: np.ndarray) -> np.ndarray:
    return np.reshape(pmf, (2,) * pmf_size(pmf), order="F")


def marginal_tensor(tensor: np.ndarray, keep: Sequence[int]) -> np.ndarray:
    """Marginal over the listed axes, returned in the listed order."""
    others = tuple(ax for ax in range(tensor.ndim) if ax not in keep)
    t = tensor.sum(axis=others) if others else tensor
    order = sorted(keep)
    return np.transpose(t, [order.index(ax) for ax in keep])


def marginal_pmf(pmf: np.ndarray, keep: Sequence[int]) -> np.ndarray:
    """Flat pmf of the variables at positions `keep` (bit order as listed)."""
    t = marginal_tensor(pmf_tensor(np.asarray(pmf, dtype=float)), list(keep))
    return np.reshape(t, -1, order="F")


def factorization_distance(
    tensor: np.ndarray, a: Sequence[int], b: Sequence[int], c: Sequence[int]
) -> float:
    """Max over positive-mass c of |P(a,b|c) − P(a|c)P(b|c)| (max norm), by axis."""
    joint = marginal_tensor(tensor, list(a) + list(b) + list(c))
    joint = joint.reshape(2 ** len(a), 2 ** len(b), 2 ** len(c))
    p_c = joint.sum(axis=(0, 1))
    mask = p_c > 0
    if not np.any(mask):
        return 0.0
    cond = joint[:, :, mask] / p_c[mask]
    p_a = cond.sum(axis=1, keepdims=True)
    p_b = cond.sum(axis=0, keepdims=True)
    return float(np.max(np.abs(cond - p_a * p_b)))


def relation_from_discrete(
    pmf: Sequence[float] | np.ndarray,
    tol: float = DEFAULT_SETTINGS.discrete_tol,
    labels: Sequence[int] | None = None,
) -> CIRelation:
    """Exact-factorization CI oracle for a binary pmf.

    Args:
        pmf: flat table of length 2^n, bit k of the index is variable k.
        tol: largest factorization distance still counted as independence.
        labels: vertex label of each variable; defaults to 1..n.
    """
    p = check_pmf(pmf)
    n = pmf_size(p)
    labels = list(range(1, n + 1)) if labels is None else [int(v) for v in labels]
    if len(labels) != n or len(set(labels)) != n:
        raise DomainError(f"need {n} distinct labels, got {labels}")
    axis = {v: k for k, v in enumerate(labels)}
    tensor = pmf_tensor(p)

    def distance(st: CIStatement) -> float:
        return factorization_distance(
            tensor, [axis[v] for v in st.a], [axis[v] for v in st.b], [axis[v] for v in st.c]
        )

    return CIRelation(
        vertex_set(labels),
        lambda st: distance(st) <= tol,
        Provenance.DISCRETE,
        name=f"discrete(n={n})",
        magnitude=distance,
    )


def random_positive_pmf(n: int, rng: np.random.Generator, floor: float = 0.01) -> np.ndarray:
    """Normalized i.i.d. uniforms on [floor, 1)."""
    u = rng.uniform(floor, 1.0, size=2**n)
    return u / u.sum()


def relation_from_gaussian(
    cov: np.ndarray,
    tol: float = DEFAULT_SETTINGS.gaussian_tol,
    labels: Sequence[int] | None = None,
    cond_cap: float = DEFAULT_SETTINGS.condition_cap,
) -> CIRelation:
    """CI oracle reading the cross block of Σ_{A∪B | C}."""
    m = as_symmetric(cov)
    lam_min = float(np.linalg.eigvalsh(m)[0]) if m.size else 1.0
    if lam_min <= 0:
        raise NumericError("covariance is not positive definite", lam_min)
    n = m.shape[0]
    labels = list(range(1, n + 1)) if labels is None else [int(v) for v in labels]
    if len(labels) != n or len(set(labels)) != n:
        raise DomainError(f"need {n} distinct labels, got {labels}")
    pos = {v: k for k, v in enumerate(labels)}

    def cross(st: CIStatement) -> float:
        a = [pos[v] for v in st.a]
        b = [pos[v] for v in st.b]
        _, cond = conditional_blocks(m, a + b, [pos[v] for v in st.c], cond_cap)
        return float(np.max(np.abs(cond[: len(a), len(a) :])))

    return CIRelation(
        vertex_set(labels),
        lambda st: cross(st) <= tol,
        Provenance.GAUSSIAN,
        name=f"gaussian(n={n})",
        magnitude=cross,
    )


def describe(relation: CIRelation, st: CIStatement) -> str:
    """Human-readable statement with its dependence magnitude when known."""
    value = relation.magnitude(st) if relation.magnitude else None
    if value is None:
        return str(st)
    return f"{fmt_set(st.a)} ⊥ {fmt_set(st.b)} | {fmt_set(st.c)} (gap {value:.3g})"


def random_edge_potential_pmf(
    n: int, edges: Iterable[tuple[int, int]], rng: np.random.Generator, floor: float = 0.01
) -> np.ndarray:
    """Strictly positive pmf ∝ Π over edges of random pair potentials.

    Vertices are 1..n. The result is Markov with respect to the edge graph
    and, for generic draws, its pairwise graph is exactly that graph.
    """
    states = np.arange(2**n)
    bits = (states[:, None] >> np.arange(n)) & 1
    log_weight = np.zeros(2**n)
    for i, j in edges:
        psi = np.log(rng.uniform(floor, 1.0, size=(2, 2)))
        log_weight += psi[bits[:, i - 1], bits[:, j - 1]]
    w = np.exp(log_weight - log_weight.max())
    return w / w.sum()


def relation_from_config(
    data: dict[str, Any], settings: Settings = DEFAULT_SETTINGS, seed: int = 0
) -> CIRelation:
    """Build a relation from a validated relation config mapping.

    Kinds: explicit (ground_set, statements as [A, B, C] triples), discrete
    (a flat pmf table), gaussian (a covariance matrix) and random (a seeded
    strictly positive pmf on n binary variables).
    """
    kind = data["kind"]
    labels = data.get("labels")
    try:
        if kind == "explicit":
            return explicit_relation(
                data["ground_set"], [tuple(item) for item in data.get("statements", [])]
            )
        if kind == "discrete":
            return relation_from_discrete(data["table"], settings.discrete_tol, labels)
        if kind == "gaussian":
            return relation_from_gaussian(
                np.asarray(data["cov"], dtype=float),
                settings.gaussian_tol,
                labels,
                settings.condition_cap,
            )
        if kind == "random":
            n = int(data["n"])
            if not 1 <= n <= settings.enumeration_cap:
                raise ConfigError(f"random relation needs 1 ≤ n ≤ {settings.enumeration_cap}, got {n}")
            pmf = random_positive_pmf(n, np.random.default_rng(seed))
            return relation_from_discrete(pmf, settings.discrete_tol, labels)
    except KeyError as e:
        raise ConfigError(f"{kind} relation config is missing {e.args[0]!r}")
    except MarkoviaError:
        raise
    except (TypeError, ValueError) as e:
        raise ConfigError(f"malformed {kind} relation config: {e}")
    raise ConfigError(f"unknown relation kind {kind!r}")
