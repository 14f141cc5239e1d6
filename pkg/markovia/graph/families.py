"""Standard graph families and the lattice reindexing ℤ^d ↔ ℕ."""

import bisect
import itertools
from collections.abc import Hashable, Iterable
from functools import lru_cache
from typing import Any

from ..errors import ConfigError, DomainError
from .lazy_graph import (
    NATURALS,
    LazyGraph,
    NeighborStream,
    VertexSet,
    from_adjacency,
    vertex_set,
)


def explicit_graph(
    edges: Iterable[tuple[int, int]], vertices: Iterable[int] | None = None
) -> LazyGraph:
    """Finite graph from an edge list; isolated vertices come from `vertices`."""
    adjacency: dict[int, set[int]] = {v: set() for v in vertex_set(vertices or ())}
    for i, j in edges:
        if i == j:
            raise DomainError(f"self-loop at vertex {i}")
        adjacency.setdefault(i, set()).add(j)
        adjacency.setdefault(j, set()).add(i)
    return from_adjacency(adjacency, name="explicit")


def reindex(
    labels: Iterable[Hashable], edges: Iterable[tuple[Hashable, Hashable]]
) -> tuple[LazyGraph, dict[Hashable, int]]:
    """Reindex a labeled graph onto 1..n in the given label order."""
    mapping = {label: k for k, label in enumerate(labels, start=1)}
    try:
        numbered = [(mapping[a], mapping[b]) for a, b in edges]
    except KeyError as e:
        raise DomainError(f"edge endpoint {e.args[0]!r} is not a listed label")
    return explicit_graph(numbered, mapping.values()), mapping


def path_graph(n: int) -> LazyGraph:
    """Path 1–2–…–n."""
    return explicit_graph([(i, i + 1) for i in range(1, n)], range(1, n + 1))


def cycle_graph(n: int) -> LazyGraph:
    if n < 3:
        raise DomainError("a cycle needs at least 3 vertices")
    edges = [(i, i + 1) for i in range(1, n)] + [(1, n)]
    return explicit_graph(edges, range(1, n + 1))


def complete_graph(vertices: Iterable[int]) -> LazyGraph:
    vs = vertex_set(vertices)
    return explicit_graph(itertools.combinations(vs, 2), vs)


def edgeless_graph(vertices: Iterable[int]) -> LazyGraph:
    return explicit_graph([], vertices)


def band_graph(order: int, size: int | None = None) -> LazyGraph:
    """Edge iff 0 < |i−j| ≤ order, on 1..size or on all of ℕ."""
    if order < 0:
        raise DomainError(f"band order must be nonnegative, got {order}")
    universe = NATURALS if size is None else tuple(range(1, size + 1))

    def oracle(i: int) -> list[int]:
        return [j for j in range(i - order, i + order + 1) if j != i and j in universe]

    name = f"band(N={order})" if size is None else f"band(N={order},n={size})"
    return LazyGraph(universe, oracle, degree_bound=2 * order, name=name)


def star_graph(hub: int = 1, size: int | None = None) -> LazyGraph:
    """Hub adjacent to every other vertex; unbounded hub degree when infinite."""
    if size is not None:
        others = [v for v in range(1, size + 1) if v != hub]
        return explicit_graph([(hub, v) for v in others], range(1, size + 1))

    def oracle(i: int) -> list[int] | NeighborStream:
        if i == hub:
            return NeighborStream(
                contains=lambda v: v >= 1 and v != hub,
                enumerate=lambda: (v for v in itertools.count(1) if v != hub),
            )
        return [hub]

    return LazyGraph(NATURALS, oracle, name=f"star(hub={hub})")


@lru_cache(maxsize=128)
def _shell(r: int, d: int) -> tuple[tuple[int, ...], ...]:
    """Points of ℤ^d with max-norm exactly r, in lexicographic order."""
    if r == 0:
        return ((0,) * d,)
    return tuple(
        p for p in itertools.product(range(-r, r + 1), repeat=d) if max(map(abs, p)) == r
    )


def _shell_base(r: int, d: int) -> int:
    """Number of points with max-norm below r."""
    return (2 * r - 1) ** d if r > 0 else 0


def lattice_coordinate(n: int, d: int = 2) -> tuple[int, ...]:
    """Coordinate of the 1-based index n; indices 1..(2m+1)^d fill the centered cube."""
    if n < 1:
        raise DomainError(f"lattice index must be >= 1, got {n}")
    k = n - 1
    r = max(int(round(k ** (1.0 / d) / 2)) - 1, 0)
    while (2 * r + 1) ** d <= k:
        r += 1
    return _shell(r, d)[k - _shell_base(r, d)]


def lattice_index(c: tuple[int, ...]) -> int:
    """Inverse of lattice_coordinate."""
    d = len(c)
    r = max(map(abs, c)) if c else 0
    shell = _shell(r, d)
    pos = bisect.bisect_left(shell, tuple(c))
    return _shell_base(r, d) + pos + 1


def lattice_graph(d: int = 2) -> LazyGraph:
    """Nearest-neighbor grid on ℤ^d, reindexed to ℕ."""
    if d < 1:
        raise DomainError(f"lattice dimension must be >= 1, got {d}")

    def oracle(n: int) -> list[int]:
        c = lattice_coordinate(n, d)
        out = []
        for axis in range(d):
            for step in (-1, 1):
                moved = list(c)
                moved[axis] += step
                out.append(lattice_index(tuple(moved)))
        return out

    return LazyGraph(NATURALS, oracle, degree_bound=2 * d, name=f"lattice(d={d})")


def lattice_cube(m: int, d: int = 2) -> VertexSet:
    """Indices of the centered cube {−m..m}^d."""
    return tuple(range(1, (2 * m + 1) ** d + 1))


def graph_from_config(data: dict[str, Any]) -> LazyGraph:
    """Build a graph from a validated graph config mapping."""
    kind = data["kind"]
    try:
        if kind == "explicit":
            return explicit_graph(
                [tuple(e) for e in data.get("edges", [])], data.get("vertices")
            )
        if kind == "band":
            return band_graph(int(data["order"]), data.get("size"))
        if kind == "lattice":
            return lattice_graph(int(data.get("dimension", 2)))
        if kind == "star":
            return star_graph(int(data.get("hub", 1)), data.get("size"))
        if kind == "path":
            return path_graph(int(data["n"]))
        if kind == "cycle":
            return cycle_graph(int(data["n"]))
        if kind == "complete":
            return complete_graph(data.get("vertices") or range(1, int(data["n"]) + 1))
        if kind == "edgeless":
            return edgeless_graph(data.get("vertices") or range(1, int(data["n"]) + 1))
    except KeyError as e:
        raise ConfigError(f"{kind} graph config is missing {e.args[0]!r}")
    raise ConfigError(f"unknown graph kind {kind!r}")
