"""Graph separation and the reach-avoiding construction."""

import itertools
from collections import deque
from collections.abc import Iterable, Iterator

from ..errors import DomainError
from ..log import get_logger
from .lazy_graph import LazyGraph, NeighborStream, VertexSet, vertex_set

logger = get_logger(__name__)


def _check_disjoint(**sets: VertexSet) -> None:
    names = list(sets)
    for x, y in itertools.combinations(names, 2):
        overlap = set(sets[x]) & set(sets[y])
        if overlap:
            raise DomainError(f"{x} and {y} overlap in {sorted(overlap)}")


def reach_avoiding(
    g: LazyGraph, a: Iterable[int], s: Iterable[int], budget: int | None = None
) -> tuple[VertexSet, bool]:
    """Vertices reachable from a by paths avoiding s.

    Breadth-first search from a with s removed. On infinite graphs the
    search stops once `budget` vertices are reached; the second element is
    False whenever the search could not be completed.
    """
    a, s = vertex_set(a), vertex_set(s)
    _check_disjoint(a=a, s=s)
    g.check_vertices(a)
    if budget is None and not g.is_finite:
        raise DomainError(f"{g.name} is infinite: reach_avoiding needs a budget")

    blocked = set(s)
    reached = set(a)
    queue = deque(a)
    exhausted = True

    while queue:
        if budget is not None and len(reached) >= budget:
            exhausted = False
            break
        v = queue.popleft()
        nbrs = g.neighbors(v)
        if isinstance(nbrs, NeighborStream):
            room = budget - len(reached) if budget is not None else 0
            nbrs, complete = nbrs.take(room + len(blocked) + len(reached))
            if not complete:
                exhausted = False
        for u in nbrs:
            if u in blocked or u in reached:
                continue
            if budget is not None and len(reached) >= budget:
                exhausted = False
                break
            reached.add(u)
            queue.append(u)

    if not exhausted:
        logger.debug(
            "reach_avoiding on %s stopped at budget %s with %d vertices",
            g.name,
            budget,
            len(reached),
        )
    return vertex_set(reached), exhausted


def is_separator(
    g: LazyGraph, a: Iterable[int], b: Iterable[int], s: Iterable[int]
) -> bool:
    """True iff every path from a to b meets s."""
    a, b, s = vertex_set(a), vertex_set(b), vertex_set(s)
    if not a or not b:
        raise DomainError("separation needs nonempty a and b")
    _check_disjoint(a=a, b=b, s=s)
    if not g.is_finite:
        raise DomainError(f"is_separator needs a finite graph, got {g.name}")
    g.check_vertices(a + b + s)
    reached, _ = reach_avoiding(g, a, s)
    return not set(reached) & set(b)


def separating_triples(
    g: LazyGraph,
) -> Iterator[tuple[VertexSet, VertexSet, VertexSet]]:
    """Every disjoint (A, B, S) with S separating A from B.

    A and B are nonempty and each unordered pair {A, B} is produced once,
    with A lexicographically first. S may be empty when A and B lie in
    different components.
    """
    vs = g.vertices
    # 0 = unused, 1 = A, 2 = B, 3 = S
    for labels in itertools.product(range(4), repeat=len(vs)):
        a = tuple(v for v, k in zip(vs, labels) if k == 1)
        b = tuple(v for v, k in zip(vs, labels) if k == 2)
        if not a or not b or a > b:
            continue
        s = tuple(v for v, k in zip(vs, labels) if k == 3)
        reached, _ = reach_avoiding(g, a, s)
        if not set(reached) & set(b):
            yield a, b, s
