"""Exhaustive checking of the graphoid axioms on a finite relation.

Each axiom is an implication over a tuple of disjoint blocks. Checking it
means instantiating every admissible tuple and collecting the tuples where
the antecedent holds but the consequent does not.
"""

from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

from ..config import DEFAULT_SETTINGS
from ..errors import SizeError
from ..graph import VertexSet, vertex_set
from ..log import get_logger
from ..report import Check, Verdict
from .relation import CIRelation
from .statements import CIStatement, disjoint_blocks, fmt_set, set_partitions

logger = get_logger(__name__)


class Axiom(Enum):
    """Graphoid axioms, by conventional label."""

    SYMMETRY = "P1*"
    DECOMPOSITION = "P2*"
    WEAK_UNION = "P3*"
    CONTRACTION = "P4*"
    INTERSECTION = "P5"
    PARTITION_INTERSECTION = "P5*"

    @classmethod
    def parse(cls, label: str) -> "Axiom":
        for axiom in cls:
            if label in (axiom.value, axiom.name, axiom.name.lower(), axiom.value.rstrip("*")):
                return axiom
        raise ValueError(f"unknown axiom {label!r}")


@dataclass(frozen=True)
class Witness:
    """A violating instantiation: the blocks involved and which form failed."""

    form: str
    blocks: tuple[VertexSet, ...]

    def to_dict(self) -> dict[str, Any]:
        return {"form": self.form, "blocks": [list(b) for b in self.blocks]}

    def __str__(self) -> str:
        return f"{self.form}: " + " ".join(fmt_set(b) for b in self.blocks)


@dataclass
class AxiomReport:
    """Result of checking one axiom."""

    axiom: Axiom
    verdict: Verdict
    witnesses: list[Witness] = field(default_factory=list)
    instantiations: int = 0
    mode: str = "exhaustive"
    seed: int | None = None

    def recheck(self, r: CIRelation) -> bool:
        """True iff every witness is still a genuine violation."""
        return all(_FORMS[w.form][1](r, w.blocks) for w in self.witnesses)

    def to_check(self) -> Check:
        return Check(
            name=f"axiom {self.axiom.value}",
            verdict=self.verdict,
            anchor="graphoid.axioms",
            detail=f"{self.instantiations} {self.mode} instantiations",
            witnesses=[w.to_dict() for w in self.witnesses],
            values={"axiom": self.axiom.value, "mode": self.mode, "seed": self.seed},
        )


def _u(*blocks: VertexSet) -> VertexSet:
    return vertex_set(v for b in blocks for v in b)


def _h(r: CIRelation, a: VertexSet, b: VertexSet, c: VertexSet) -> bool:
    return r.holds_statement(CIStatement(a, b, c))


# Each violation test returns True when the instantiation breaks the axiom.


def _symmetry(r: CIRelation, blocks) -> bool:
    x, y, z = blocks
    return bool(r.query(CIStatement(x, y, z))) != bool(r.query(CIStatement(y, x, z)))


def _decomposition(r: CIRelation, blocks) -> bool:
    x, y, w, z = blocks
    return _h(r, x, _u(y, w), z) and not (_h(r, x, y, z) and _h(r, x, w, z))


def _weak_union(r: CIRelation, blocks) -> bool:
    x, y, w, z = blocks
    return _h(r, x, _u(y, w), z) and not _h(r, x, y, _u(z, w))


def _contraction(r: CIRelation, blocks) -> bool:
    x, y, w, z = blocks
    return _h(r, x, y, _u(z, w)) and _h(r, x, w, z) and not _h(r, x, _u(y, w), z)


def _intersection(r: CIRelation, blocks) -> bool:
    x, y, w, z = blocks
    return _h(r, x, y, _u(z, w)) and _h(r, x, w, _u(z, y)) and not _h(r, x, _u(y, w), z)


def _singleton_partition(r: CIRelation, blocks) -> bool:
    x, y, z = blocks
    if len(x) < 2:
        return False
    for v in x:
        rest = tuple(u for u in x if u != v)
        if not _h(r, (v,), y, _u(z, rest)):
            return False
    return not _h(r, x, y, z)


def _general_partition(r: CIRelation, blocks) -> bool:
    x, y, z, *parts = blocks
    for part in parts:
        rest = tuple(u for u in x if u not in part)
        if not _h(r, part, y, _u(z, rest)):
            return False
    return not _h(r, x, y, z)


# form name -> (block nonempty flags, violation test)
_FORMS: dict[str, tuple[tuple[bool, ...], Callable[[CIRelation, tuple], bool]]] = {
    "symmetry": ((True, True, False), _symmetry),
    "decomposition": ((True, True, True, False), _decomposition),
    "weak-union": ((True, True, True, False), _weak_union),
    "contraction": ((True, True, True, False), _contraction),
    "intersection": ((True, True, True, False), _intersection),
    "singleton-partition": ((True, True, False), _singleton_partition),
    "partition": ((True, True, False), _general_partition),
}

_AXIOM_FORMS = {
    Axiom.SYMMETRY: ["symmetry"],
    Axiom.DECOMPOSITION: ["decomposition"],
    Axiom.WEAK_UNION: ["weak-union"],
    Axiom.CONTRACTION: ["contraction"],
    Axiom.INTERSECTION: ["intersection"],
    Axiom.PARTITION_INTERSECTION: ["intersection", "singleton-partition"],
}


def check_axiom(
    r: CIRelation,
    axiom: Axiom | str,
    cap: int = DEFAULT_SETTINGS.axiom_cap,
    sample: int | None = None,
    seed: int = 0,
    all_partitions: bool = False,
    max_witnesses: int = 25,
) -> AxiomReport:
    """Instantiate an axiom over disjoint subset tuples of the ground set.

    Args:
        r: relation to check.
        axiom: which axiom.
        cap: largest ground set checked exhaustively.
        sample: check this many random tuples instead (required above cap).
        seed: seed for sampled mode.
        all_partitions: for P5*, also enumerate every set partition of X
            rather than only the singleton partition.
        max_witnesses: witnesses kept in the report.

    Returns:
        AxiomReport with the violating instantiations found.
    """
    if isinstance(axiom, str):
        axiom = Axiom.parse(axiom)
    ground = r.ground_set
    if sample is None and len(ground) > cap:
        raise SizeError(f"exhaustive {axiom.value} check", len(ground), cap)
    rng = np.random.default_rng(seed) if sample is not None else None

    forms = list(_AXIOM_FORMS[axiom])
    if axiom is Axiom.PARTITION_INTERSECTION and all_partitions:
        forms.append("partition")

    witnesses: list[Witness] = []
    violations = 0
    count = 0
    for form in forms:
        nonempty, violated = _FORMS[form]
        base = "singleton-partition" if form == "partition" else form
        for blocks in disjoint_blocks(ground, len(nonempty), _FORMS[base][0], sample, rng):
            instances = [blocks]
            if form == "partition":
                x = blocks[0]
                instances = [
                    (*blocks, *parts)
                    for parts in set_partitions(x)
                    if len(parts) >= 2
                ]
            for inst in instances:
                count += 1
                if violated(r, inst):
                    violations += 1
                    if len(witnesses) < max_witnesses:
                        witnesses.append(Witness(form, inst))

    logger.debug(
        "%s on %s: %d instantiations, %d violations", axiom.value, r.name, count, violations
    )
    return AxiomReport(
        axiom=axiom,
        verdict=Verdict.of(violations == 0),
        witnesses=witnesses,
        instantiations=count,
        mode="exhaustive" if sample is None else "sampled",
        seed=None if sample is None else seed,
    )


def check_all_axioms(r: CIRelation, **kwargs: Any) -> dict[Axiom, AxiomReport]:
    return {axiom: check_axiom(r, axiom, **kwargs) for axiom in Axiom}
