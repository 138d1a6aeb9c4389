"""Geometric index bookkeeping.

Index values are declared facts attached to containments, checked against
the classical constraints: multiplicativity along nested tori, evenness of
the index of a union of unknotted index-0 tori, and boundary parallelism
for index one.  Nothing here computes an index from an embedding.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Hashable, Sequence

from .errors import HypothesisError, NestingError, ShapeError
from .model import CYCLE, ChainNode, ValidationReport, Violation

# Index of a stage's whole chain inside the torus that contains it.
ANTOINE_STAGE_INDEX = 2


@dataclass(frozen=True)
class IndexDecl:
    """``value`` is the geometric index of the union of ``child_union`` in the solid torus ``parent``."""

    parent: Hashable
    child_union: frozenset
    value: int

    def __post_init__(self):
        object.__setattr__(self, "child_union", frozenset(self.child_union))
        if not isinstance(self.value, int) or self.value < 0:
            raise ValueError(f"geometric index must be a non-negative int, got {self.value!r}")
        if not self.child_union:
            raise ValueError("child union must name at least one torus")


@dataclass(frozen=True)
class ParallelCertificate:
    """Records that the region between ``inner`` and ``outer`` is a product ``T x I``."""

    inner: Hashable
    outer: Hashable

    def __str__(self) -> str:
        return f"boundaries of {self.inner} and {self.outer} are parallel"


def compose_index(decls: Sequence[IndexDecl]) -> int:
    """Index of the innermost union in the outermost torus of a nested chain.

    ``decls`` runs inside out: the parent of each declaration must be the
    sole member of the next declaration's child union.
    """
    if not decls:
        raise NestingError("empty index chain")
    for k in range(len(decls) - 1):
        inner, outer = decls[k], decls[k + 1]
        if outer.child_union != frozenset([inner.parent]):
            raise NestingError(
                f"declaration {k + 1} contains {sorted(map(str, outer.child_union))}, "
                f"expected exactly {inner.parent!r}"
            )
    return prod(d.value for d in decls)


def check_evenness(decl: IndexDecl, unknotted_index0: Sequence[bool]) -> ValidationReport:
    """Flag an odd index for a union of unknotted tori that each have index 0 in the parent."""
    flags = list(unknotted_index0)
    if len(flags) != len(decl.child_union):
        raise ValueError(f"expected {len(decl.child_union)} flags, got {len(flags)}")
    if all(flags) and decl.value % 2:
        return ValidationReport((Violation((), "odd-index",
                                           f"union of {len(flags)} unknotted index-0 tori has odd index {decl.value}"),))
    return ValidationReport()


def mark_parallel(decl: IndexDecl, *, child_unknotted: bool = True,
                  parent_unknotted: bool = True) -> ParallelCertificate | None:
    if len(decl.child_union) != 1:
        raise HypothesisError(f"parallelism needs a single torus, got a union of {len(decl.child_union)}")
    if not (child_unknotted and parent_unknotted):
        raise HypothesisError("parallelism needs unknotted inner and outer tori")
    if decl.value != 1:
        return None
    (inner,) = decl.child_union
    return ParallelCertificate(inner, decl.parent)


def antoine_stage_index(node: ChainNode) -> int:
    """Index of the union of a chain's tori in its containing torus."""
    if node.shape.kind != CYCLE:
        raise ShapeError(f"{node.shape} is not an Antoine stage")
    return ANTOINE_STAGE_INDEX


def stage_index_chain(node: ChainNode, levels: int) -> list[IndexDecl]:
    """Declarations ``N(M_d, M_{d-1}), ..., N(M_1, M_0)`` for the stage unions below ``node``.

    Every chain on each of the first ``levels`` stages must be a cycle.
    """
    if levels < 1:
        raise ValueError("need at least one level")
    decls = []
    frontier = [node]
    for d in range(1, levels + 1):
        if not frontier:
            raise ShapeError(f"tower has fewer than {levels} stages")
        values = {antoine_stage_index(n) for n in frontier}
        (value,) = values
        decls.append(IndexDecl(("stage", d - 1), frozenset([("stage", d)]), value))
        frontier = [c for n in frontier for c in n.slots if isinstance(c, ChainNode)]
    decls.reverse()
    return decls


def composed_stage_index(node: ChainNode, levels: int) -> int:
    return compose_index(stage_index_chain(node, levels))
