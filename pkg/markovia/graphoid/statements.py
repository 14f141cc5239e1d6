"""Conditional-independence statements and subset enumeration helpers."""

import itertools
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from ..graph import VertexSet, vertex_set


def fmt_set(s: VertexSet) -> str:
    return "{" + ",".join(map(str, s)) + "}"


@dataclass(frozen=True)
class CIStatement:
    """The triple of "a ⊥ b | c" over finite vertex sets."""

    a: VertexSet
    b: VertexSet
    c: VertexSet = ()

    def __post_init__(self):
        a, b, c = vertex_set(self.a), vertex_set(self.b), vertex_set(self.c)
        if not a or not b:
            raise DomainError("CI statements need nonempty a and b blocks")
        if set(a) & set(b) or set(a) & set(c) or set(b) & set(c):
            raise DomainError(f"blocks overlap in {fmt_set(a)} ⊥ {fmt_set(b)} | {fmt_set(c)}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @property
    def key(self) -> tuple[VertexSet, VertexSet, VertexSet]:
        return (self.a, self.b, self.c)

    @property
    def support(self) -> VertexSet:
        return vertex_set(self.a + self.b + self.c)

    def canonical(self) -> "CIStatement":
        """Symmetric twin with a ≤ b lexicographically."""
        if self.b < self.a:
            return CIStatement(self.b, self.a, self.c)
        return self

    def twin(self) -> "CIStatement":
        return CIStatement(self.b, self.a, self.c)

    def to_list(self) -> list[list[int]]:
        return [list(self.a), list(self.b), list(self.c)]

    def __str__(self) -> str:
        return f"{fmt_set(self.a)} ⊥ {fmt_set(self.b)} | {fmt_set(self.c)}"


def disjoint_blocks(
    ground: Sequence[int],
    k: int,
    nonempty: Sequence[bool],
    sample: int | None = None,
    rng: np.random.Generator | None = None,
) -> Iterator[tuple[VertexSet, ...]]:
    """All (or `sample` random) tuples of k pairwise disjoint subsets of ground.

    Block i must be nonempty when nonempty[i] is set. Elements may also be
    left out of every block.
    """
    ground = tuple(ground)

    def build(labels: Iterable[int]) -> tuple[VertexSet, ...]:
        blocks: list[list[int]] = [[] for _ in range(k)]
        for v, label in zip(ground, labels):
            if label:
                blocks[label - 1].append(v)
        return tuple(tuple(b) for b in blocks)

    def admissible(blocks: tuple[VertexSet, ...]) -> bool:
        return all(b or not need for b, need in zip(blocks, nonempty))

    if sample is None:
        for labels in itertools.product(range(k + 1), repeat=len(ground)):
            blocks = build(labels)
            if admissible(blocks):
                yield blocks
        return

    rng = rng or np.random.default_rng(0)
    produced = 0
    attempts = 0
    while produced < sample and attempts < 50 * sample:
        attempts += 1
        blocks = build(rng.integers(0, k + 1, size=len(ground)).tolist())
        if admissible(blocks):
            produced += 1
            yield blocks


def set_partitions(items: Sequence[int]) -> Iterator[list[VertexSet]]:
    """Every partition of items into nonempty blocks."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in set_partitions(rest):
        yield [(first,)] + partition
        for i, block in enumerate(partition):
            yield partition[:i] + [vertex_set((first, *block))] + partition[i + 1 :]
