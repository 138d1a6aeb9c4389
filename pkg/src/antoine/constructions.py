"""Builders for the cyclic, bi-infinite and composite rigid constructions.

Every builder draws its rigid classes from a :class:`RigidAllocator`, which
never hands out the same id twice.  Fresh classes are how inequivalence of
the rigid pieces is modeled, so two builds from independent allocators are
never equivalent.
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass, field

from .errors import DomainError, ParseError
from .model import ChainNode, ChainShape, DefiningSequence, RigidClass, RigidLeaf, SlotContent, Truncation

ZM_BLOCK = 4  # distinct rigid classes per period of a finite necklace
Z_BLOCK = 3  # distinct rigid classes per period of the bi-infinite chain


class RigidAllocator:
    """Issues fresh :class:`RigidClass` ids ``"<seed>.<counter>"``.

    Allocators with different seeds never collide.  Without a seed a random
    one is drawn.  Not thread-safe.
    """

    def __init__(self, seed: int | None = None):
        self.seed = secrets.randbits(48) if seed is None else seed
        self._counter = 0
        self.log: list[RigidClass] = []

    def fresh(self) -> RigidClass:
        self._counter += 1
        rc = RigidClass(f"{self.seed:x}.{self._counter}", f"C{self._counter}")
        self.log.append(rc)
        return rc

    def fresh_many(self, k: int) -> list[RigidClass]:
        return [self.fresh() for _ in range(k)]

    def __repr__(self) -> str:
        return f"RigidAllocator(seed={self.seed}, issued={self._counter})"


@dataclass(frozen=True)
class GroupSpec:
    """``Z^rank + Z/m_1 + ... + Z/m_k``, torsion kept in the order given."""

    rank: int
    torsion: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(self.torsion))
        if not isinstance(self.rank, int) or self.rank < 0:
            raise DomainError(f"rank must be a non-negative integer, got {self.rank!r}")
        bad = [m for m in self.torsion if not isinstance(m, int) or m < 2]
        if bad:
            raise DomainError(f"torsion orders must be integers >= 2, got {bad}")
        if self.rank + len(self.torsion) < 1:
            raise DomainError("empty group spec: need rank + number of torsion summands >= 1")

    def __str__(self) -> str:
        parts = [f"Z^{self.rank}"] if self.rank else []
        parts += [f"Z/{m}" for m in self.torsion]
        return " x ".join(parts)


def _zm_node(m: int, alloc: RigidAllocator) -> ChainNode:
    if not isinstance(m, int) or m < 1:
        raise DomainError(f"m must be an integer >= 1, got {m!r}")
    classes = alloc.fresh_many(ZM_BLOCK)
    slots = [RigidLeaf(classes[i % ZM_BLOCK]) for i in range(ZM_BLOCK * m)]
    return ChainNode(ChainShape.cycle(ZM_BLOCK * m), slots)


def _z_node(alloc: RigidAllocator) -> ChainNode:
    classes = alloc.fresh_many(Z_BLOCK)
    return ChainNode(ChainShape.biinfinite(Z_BLOCK), [RigidLeaf(c) for c in classes], pinch=True)


def build_zm(m: int, alloc: RigidAllocator) -> DefiningSequence:
    """Necklace of ``4m`` tori whose rigid pieces repeat four fresh classes; symmetric under ``Z_m``."""
    return DefiningSequence.from_root(_zm_node(m, alloc))


def build_z(alloc: RigidAllocator) -> DefiningSequence:
    """Bi-infinite chain pinched at ``w``, three fresh classes repeating with period 3."""
    return DefiningSequence.from_root(_z_node(alloc))


def build_group(spec: GroupSpec, alloc: RigidAllocator) -> DefiningSequence:
    """Open chain of ``rank + k`` tori: bi-infinite components first, then one necklace per torsion order."""
    if not isinstance(spec, GroupSpec):
        raise DomainError(f"expected a GroupSpec, got {type(spec).__name__}")
    comps = [_z_node(alloc) for _ in range(spec.rank)]
    comps += [_zm_node(m, alloc) for m in spec.torsion]
    return DefiningSequence.from_root(ChainNode(ChainShape.path(len(comps)), comps))


def uniform_tower(n: int, depth: int, leaf: SlotContent | None = None) -> ChainNode:
    """Self-similar tower: a cycle of ``n`` tori repeated in every torus for ``depth`` stages.

    The last stage holds ``leaf`` in every slot (a :class:`Truncation` by default).
    """
    if depth < 1:
        raise DomainError("depth must be at least 1")
    content: SlotContent = Truncation() if leaf is None else leaf
    node = ChainNode(ChainShape.cycle(n), [content] * n)
    for _ in range(depth - 1):
        node = ChainNode(ChainShape.cycle(n), [node] * n)
    return node


# ---------------------------------------------------------------------------
# group spec grammar:  term ('x' term)*,  term := 'Z' ['^' int] | 'Z/' int

_DIGITS = "0123456789"
_SYMBOLS = "Z^/x+⊕"


def _tokens(text: str):
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in _DIGITS:
            j = i
            while j < len(text) and text[j] in _DIGITS:
                j += 1
            yield "int", text[i:j], i
            i = j
        elif ch in _SYMBOLS:
            yield ch, ch, i
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i, text)
    yield "end", "", len(text)


def parse_group_spec(text: str) -> GroupSpec:
    """Parse ``"Z^n x Z/m1 x Z/m2 ..."``.

    ``Z`` alone means ``Z^1`` and ``Z^0`` contributes nothing; ``x``, ``+`` and
    ``⊕`` all separate summands.  Syntax errors raise :class:`ParseError` with
    the offending position; a syntactically fine but empty or degenerate spec
    raises :class:`DomainError`.
    """
    toks = list(_tokens(text))
    k = 0

    def take(kind: str, what: str):
        nonlocal k
        tk = toks[k]
        if tk[0] != kind:
            found = "end of input" if tk[0] == "end" else repr(tk[1])
            raise ParseError(f"expected {what}, found {found}", tk[2], text)
        k += 1
        return tk

    rank = 0
    torsion = []
    while True:
        take("Z", "'Z'")
        if toks[k][0] == "^":
            k += 1
            rank += int(take("int", "an exponent")[1])
        elif toks[k][0] == "/":
            k += 1
            torsion.append(int(take("int", "a modulus")[1]))
        else:
            rank += 1
        if toks[k][0] == "end":
            break
        if toks[k][0] not in ("x", "+", "⊕"):
            raise ParseError(f"expected 'x' or end of input, found {toks[k][1]!r}", toks[k][2], text)
        k += 1
    return GroupSpec(rank, tuple(torsion))
