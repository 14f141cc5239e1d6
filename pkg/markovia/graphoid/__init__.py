"""Ternary relations, graphoid axioms and Markov properties."""

from .statements import CIStatement, disjoint_blocks, fmt_set, set_partitions
from .relation import (
    CIRelation,
    Provenance,
    check_pmf,
    explicit_relation,
    factorization_distance,
    marginal_pmf,
    pmf_tensor,
    random_edge_potential_pmf,
    random_positive_pmf,
    relation_from_config,
    relation_from_discrete,
    relation_from_gaussian,
)
from .axioms import Axiom, AxiomReport, Witness, check_all_axioms, check_axiom
from .markov import (
    MarkovProperty,
    check_markov,
    equivalence_audit,
    markov_statements,
    pairwise_graph,
)

__all__ = [
    "CIStatement",
    "disjoint_blocks",
    "fmt_set",
    "set_partitions",
    "CIRelation",
    "Provenance",
    "check_pmf",
    "explicit_relation",
    "factorization_distance",
    "marginal_pmf",
    "pmf_tensor",
    "random_edge_potential_pmf",
    "random_positive_pmf",
    "relation_from_config",
    "relation_from_discrete",
    "relation_from_gaussian",
    "Axiom",
    "AxiomReport",
    "Witness",
    "check_all_axioms",
    "check_axiom",
    "MarkovProperty",
    "check_markov",
    "equivalence_audit",
    "markov_statements",
    "pairwise_graph",
]
