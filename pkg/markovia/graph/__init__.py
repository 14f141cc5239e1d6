"""Undirected graphs over ℕ: neighbor oracles, separation, standard families."""

from .lazy_graph import (
    NATURALS,
    NATURALS_WITH_ZERO,
    LazyGraph,
    Naturals,
    NeighborStream,
    VertexSet,
    from_adjacency,
    induced_subgraph,
    neighbors,
    validate_symmetry,
    vertex_set,
)
from .separation import is_separator, reach_avoiding, separating_triples
from .families import (
    band_graph,
    complete_graph,
    cycle_graph,
    edgeless_graph,
    explicit_graph,
    graph_from_config,
    lattice_coordinate,
    lattice_cube,
    lattice_graph,
    lattice_index,
    path_graph,
    reindex,
    star_graph,
)

__all__ = [
    "NATURALS",
    "NATURALS_WITH_ZERO",
    "LazyGraph",
    "Naturals",
    "NeighborStream",
    "VertexSet",
    "from_adjacency",
    "induced_subgraph",
    "neighbors",
    "validate_symmetry",
    "vertex_set",
    "is_separator",
    "reach_avoiding",
    "separating_triples",
    "band_graph",
    "complete_graph",
    "cycle_graph",
    "edgeless_graph",
    "explicit_graph",
    "graph_from_config",
    "lattice_coordinate",
    "lattice_cube",
    "lattice_graph",
    "lattice_index",
    "path_graph",
    "reindex",
    "star_graph",
]
