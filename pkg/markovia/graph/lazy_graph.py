"""Undirected graphs over finite or countably infinite vertex sets."""

import itertools
from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError
from ..log import get_logger

logger = get_logger(__name__)

VertexSet = tuple[int, ...]


def vertex_set(members: Iterable[int]) -> VertexSet:
    """Normalize an iterable of vertices into a strictly sorted tuple."""
    out = set()
    for v in members:
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
            raise DomainError(f"vertex {v!r} is not a natural number")
        if v < 0:
            raise DomainError(f"vertex {v} is negative")
        out.add(int(v))
    return tuple(sorted(out))


@dataclass(frozen=True)
class Naturals:
    """The countably infinite universe {start, start+1, ...}."""

    start: int = 1

    def __contains__(self, v: object) -> bool:
        return isinstance(v, (int, np.integer)) and not isinstance(v, bool) and v >= self.start

    def __str__(self) -> str:
        return f"naturals>={self.start}"


NATURALS = Naturals(1)
NATURALS_WITH_ZERO = Naturals(0)


@dataclass(frozen=True)
class NeighborStream:
    """An unbounded neighbor set: a membership test plus an ordered enumeration."""

    contains: Callable[[int], bool]
    enumerate: Callable[[], Iterator[int]]

    def __contains__(self, v: object) -> bool:
        return isinstance(v, int) and self.contains(v)

    def take(self, budget: int) -> tuple[VertexSet, bool]:
        """Return up to `budget` members and whether the stream ran out."""
        head = list(itertools.islice(self.enumerate(), budget + 1))
        if len(head) > budget:
            return vertex_set(head[:budget]), False
        return vertex_set(head), True


Neighbors = VertexSet | NeighborStream


@dataclass(frozen=True, eq=False)
class LazyGraph:
    """Graph given by a neighbor oracle.

    The universe is either an explicit finite vertex tuple or a Naturals
    marker. Finite graphs are the special case with a tuple universe.
    """

    universe: VertexSet | Naturals
    oracle: Callable[[int], Iterable[int] | NeighborStream] = field(repr=False)
    degree_bound: int | None = None
    name: str = "graph"

    @property
    def is_finite(self) -> bool:
        return not isinstance(self.universe, Naturals)

    @property
    def vertices(self) -> VertexSet:
        """Vertex tuple of a finite graph."""
        if not self.is_finite:
            raise DomainError(f"{self.name} has an infinite vertex set")
        return self.universe

    def __contains__(self, v: object) -> bool:
        return v in self.universe

    def check_vertex(self, v: int) -> None:
        if v not in self.universe:
            raise DomainError(f"vertex {v} is outside the universe of {self.name}")

    def check_vertices(self, vs: Iterable[int]) -> None:
        for v in vs:
            self.check_vertex(v)

    def neighbors(self, i: int) -> Neighbors:
        """Return ne(i), or a NeighborStream when the oracle is unbounded."""
        self.check_vertex(i)
        raw = self.oracle(i)
        if isinstance(raw, NeighborStream):
            if self.degree_bound is not None:
                raise DomainError(
                    f"{self.name}: vertex {i} has unbounded degree despite "
                    f"degree bound {self.degree_bound}"
                )
            return raw
        result = vertex_set(raw)
        if i in result:
            raise DomainError(f"{self.name}: self-loop at vertex {i}")
        if self.degree_bound is not None and len(result) > self.degree_bound:
            raise DomainError(
                f"{self.name}: vertex {i} has degree {len(result)} "
                f"above bound {self.degree_bound}"
            )
        return result

    def adjacent(self, i: int, j: int) -> bool:
        return j in self.neighbors(i)

    def closure(self, i: int) -> Neighbors:
        """cl(i) = {i} together with ne(i)."""
        nbrs = self.neighbors(i)
        if isinstance(nbrs, NeighborStream):
            return NeighborStream(
                contains=lambda v: v == i or nbrs.contains(v),
                enumerate=lambda: itertools.chain([i], nbrs.enumerate()),
            )
        return vertex_set((i, *nbrs))

    def degree(self, i: int) -> float:
        """|ne(i)|, or infinity for unbounded neighbor sets."""
        nbrs = self.neighbors(i)
        if isinstance(nbrs, NeighborStream):
            return float("inf")
        return len(nbrs)

    def edges(self) -> list[tuple[int, int]]:
        """Sorted edge list (i < j) of a finite graph."""
        out = []
        for i in self.vertices:
            for j in self.neighbors(i):
                if i < j:
                    out.append((i, j))
        return out


def from_adjacency(
    adjacency: dict[int, Iterable[int]], name: str = "graph"
) -> LazyGraph:
    """Build a finite graph from an adjacency mapping, symmetrizing nothing."""
    table = {v: vertex_set(nbrs) for v, nbrs in adjacency.items()}
    universe = vertex_set(table)
    for v, nbrs in table.items():
        for u in nbrs:
            if u not in table:
                raise DomainError(f"{name}: neighbor {u} of {v} is not a vertex")
    return LazyGraph(universe, table.__getitem__, name=name)


def induced_subgraph(g: LazyGraph, s: Iterable[int]) -> LazyGraph:
    """Finite graph on s with edge set E ∩ (s × s)."""
    members = vertex_set(s)
    g.check_vertices(members)
    keep = set(members)
    adjacency: dict[int, list[int]] = {}
    for v in members:
        nbrs = g.neighbors(v)
        if isinstance(nbrs, NeighborStream):
            adjacency[v] = [u for u in members if u != v and u in nbrs]
        else:
            adjacency[v] = [u for u in nbrs if u in keep]
    return from_adjacency(adjacency, name=f"{g.name}[{len(members)}]")


def neighbors(g: LazyGraph, i: int) -> Neighbors:
    """Module-level alias of LazyGraph.neighbors."""
    return g.neighbors(i)


def validate_symmetry(
    g: LazyGraph, probes: int = 1000, seed: int = 0, probe_range: int = 500
) -> list[tuple[int, int]]:
    """Spot-check j ∈ ne(i) ⇔ i ∈ ne(j) on sampled vertex pairs.

    Returns the asymmetric pairs found; an empty list is evidence, not proof.
    """
    rng = np.random.default_rng(seed)
    if g.is_finite:
        pool = np.array(g.vertices)
    else:
        start = g.universe.start
        pool = np.arange(start, start + probe_range)
    if len(pool) == 0:
        return []

    bad: set[tuple[int, int]] = set()
    checked = 0
    while checked < probes:
        i = int(rng.choice(pool))
        nbrs = g.neighbors(i)
        if isinstance(nbrs, NeighborStream):
            candidates, _ = nbrs.take(16)
        else:
            candidates = nbrs
        if not candidates:
            # Probe a random non-neighbor instead.
            j = int(rng.choice(pool))
            if j != i and i in g.neighbors(j):
                bad.add((min(i, j), max(i, j)))
            checked += 1
            continue
        for j in candidates:
            if i not in g.neighbors(j):
                bad.add((min(i, j), max(i, j)))
            checked += 1
            if checked >= probes:
                break
    if bad:
        logger.warning("%s: %d asymmetric neighbor pairs", g.name, len(bad))
    return sorted(bad)
