import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from markovia.errors import DomainError
from markovia.graph import (
    band_graph,
    cycle_graph,
    explicit_graph,
    from_adjacency,
    induced_subgraph,
    is_separator,
    lattice_coordinate,
    lattice_cube,
    lattice_graph,
    lattice_index,
    path_graph,
    reach_avoiding,
    separating_triples,
    star_graph,
    validate_symmetry,
)


@st.composite
def graph_and_triple(draw, max_n: int = 7):
    n = draw(st.integers(min_value=2, max_value=max_n))
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    edges = [p for p in pairs if draw(st.booleans())]
    labels = draw(st.lists(st.integers(0, 3), min_size=n, max_size=n))
    a = [v for v, k in zip(range(1, n + 1), labels) if k == 1]
    b = [v for v, k in zip(range(1, n + 1), labels) if k == 2]
    s = [v for v, k in zip(range(1, n + 1), labels) if k == 3]
    if not a:
        a = [1]
        b = [v for v in b if v != 1]
        s = [v for v in s if v != 1]
    if not b:
        b = [n] if n not in a else []
        s = [v for v in s if v not in b]
    return n, edges, a, b, s


def _separated_by_paths(n, edges, a, b, s) -> bool:
    g = nx.Graph()
    g.add_nodes_from(range(1, n + 1))
    g.add_edges_from(edges)
    blocked = set(s)
    for x in a:
        for y in b:
            for path in nx.all_simple_paths(g, x, y):
                if not blocked & set(path):
                    return False
    return True


@given(graph_and_triple())
def test_is_separator_matches_path_enumeration(case):
    n, edges, a, b, s = case
    if not b:
        return
    g = explicit_graph(edges, range(1, n + 1))
    assert is_separator(g, a, b, s) == _separated_by_paths(n, edges, a, b, s)


@pytest.mark.slow
def test_is_separator_on_random_graphs():
    rng = np.random.default_rng(3)
    for _ in range(200):
        n = int(rng.integers(2, 9))
        pairs = list(itertools.combinations(range(1, n + 1), 2))
        edges = [p for p in pairs if rng.random() < 0.4]
        labels = rng.integers(0, 4, size=n)
        a = [v for v, k in zip(range(1, n + 1), labels) if k == 1]
        b = [v for v, k in zip(range(1, n + 1), labels) if k == 2]
        s = [v for v, k in zip(range(1, n + 1), labels) if k == 3]
        if not a or not b:
            continue
        g = explicit_graph(edges, range(1, n + 1))
        assert is_separator(g, a, b, s) == _separated_by_paths(n, edges, a, b, s)


def test_path_separation():
    g = path_graph(5)
    assert is_separator(g, [1], [5], [3])
    assert not is_separator(g, [1], [5], [])
    assert is_separator(g, [1, 2], [4, 5], [3])


def test_cycle_needs_two_cut_vertices():
    g = cycle_graph(6)
    assert not is_separator(g, [1], [4], [2])
    assert is_separator(g, [1], [4], [2, 6])


def test_separation_rejects_overlap_and_empty_sets():
    g = path_graph(4)
    with pytest.raises(DomainError):
        is_separator(g, [1, 2], [2, 3], [])
    with pytest.raises(DomainError):
        is_separator(g, [], [3], [])
    with pytest.raises(DomainError):
        is_separator(g, [1], [9], [])


def test_reach_avoiding_on_infinite_band_needs_budget():
    g = band_graph(1)
    with pytest.raises(DomainError):
        reach_avoiding(g, [1], [5])
    reached, complete = reach_avoiding(g, [1], [5], budget=100)
    assert reached == (1, 2, 3, 4)
    assert complete


def test_reach_avoiding_budget_exhaustion():
    reached, complete = reach_avoiding(band_graph(2), [1], [], budget=10)
    assert not complete
    assert len(reached) == 10


def test_infinite_star_hub_stream():
    g = star_graph(hub=1)
    assert g.degree(1) == float("inf")
    assert g.degree(7) == 1
    assert 10**6 in g.neighbors(1)
    assert 1 in g.closure(1)


def test_closure_and_degree():
    g = path_graph(4)
    assert g.closure(2) == (1, 2, 3)
    assert g.degree(1) == 1
    assert g.edges() == [(1, 2), (2, 3), (3, 4)]


def test_degree_bound_enforced():
    g = from_adjacency({1: [2, 3, 4], 2: [1], 3: [1], 4: [1]})
    bounded = type(g)(g.universe, g.oracle, degree_bound=2, name="bounded")
    with pytest.raises(DomainError):
        bounded.neighbors(1)


def test_induced_subgraph_of_lattice():
    g = induced_subgraph(lattice_graph(2), lattice_cube(1))
    assert g.vertices == tuple(range(1, 10))
    # center has four neighbors, corners two
    assert g.degree(1) == 4
    assert sorted(g.degree(v) for v in g.vertices) == [2, 2, 2, 2, 3, 3, 3, 3, 4]


@pytest.mark.parametrize("d", [1, 2, 3])
def test_lattice_reindexing_is_a_bijection(d):
    points = [lattice_coordinate(n, d) for n in range(1, 5**d + 1)]
    assert len(set(points)) == len(points)
    assert all(lattice_index(c) == n for n, c in enumerate(points, start=1))
    # the first (2m+1)^d indices fill the centered cube
    for m in (0, 1, 2):
        cube = points[: (2 * m + 1) ** d]
        assert max(max(abs(x) for x in c) for c in cube) == m


def test_lattice_neighbors_are_symmetric():
    g = lattice_graph(2)
    assert validate_symmetry(g, probes=300, seed=1) == []
    assert g.degree(1) == 4


def test_validate_symmetry_finds_asymmetric_oracle():
    g = from_adjacency({1: [2], 2: [], 3: []})
    assert validate_symmetry(g, probes=50, seed=0) == [(1, 2)]


def test_separating_triples_on_path():
    triples = set(separating_triples(path_graph(3)))
    assert ((1,), (3,), (2,)) in triples
    assert ((1,), (3,), ()) not in triples
    # 1 and 2 are adjacent, nothing separates them
    assert not any(a == (1,) and b == (2,) for a, b, _ in triples)
