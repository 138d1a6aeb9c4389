"""Local genus of points and the genus spectrum of a defining sequence.

All handlebodies in these sequences are solid tori, so every point that
stays inside torus stages has local genus 1.  A pinch point is the common
limit of the two halves of an infinite chain; the halves are sliced apart by
a disc through the pinch, so its genus is the sum over the sides present,
one per side.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import AddressError, PathError, TruncationError
from .model import (BIINFINITE, INFINITE_KINDS, RAY, ChainNode, ChainShape, DefiningSequence, InRigidLeaf,
                    PinchPoint, PointAddress, SlotContent, Truncation, TruncationFrontier, iter_nodes, navigate,
                    resolve)

TORUS_GENUS = 1
SIDE_GENUS = 1  # genus at w of the Cantor set on one side of a pinch


def pinch_sides(node: ChainNode) -> int:
    if node.shape.kind == BIINFINITE:
        return 2
    if node.shape.kind == RAY:
        return 1
    return 0


def _check_path(seq: DefiningSequence, address: PointAddress):
    content: SlotContent = seq.roots[address.root]
    for i in address.path:
        if isinstance(content, Truncation):
            raise TruncationError(f"{address}: path meets a truncated slot")
        if not isinstance(content, ChainNode):
            raise PathError(f"path descends into a {type(content).__name__}")
        content = content.slot(i)
    if isinstance(content, Truncation):
        raise TruncationError(f"{address}: path ends on a truncated slot")


def local_genus(seq: DefiningSequence, p: PointAddress) -> int:
    """Local genus of the Cantor set of ``seq`` at the point named by ``p``."""
    if not 0 <= p.root < len(seq.roots):
        raise AddressError(f"{p}: no root {p.root}")
    try:
        _check_path(seq, p)
    except PathError as exc:
        raise AddressError(f"{p}: {exc}") from exc
    content = resolve(seq, p)
    if isinstance(p.terminal, PinchPoint):
        return SIDE_GENUS * pinch_sides(content)
    return TORUS_GENUS


@dataclass(frozen=True)
class GenusReport:
    """Genus values attained, with the finitely many exceptional points listed.

    ``exceptional`` maps a genus value to the points attaining it; every point
    not listed there has genus ``generic``.
    """

    exceptional: dict = field(default_factory=dict)
    generic: int = TORUS_GENUS

    @property
    def counts(self) -> dict[int, int]:
        return {g: len(pts) for g, pts in self.exceptional.items()}

    @property
    def spectrum(self) -> dict:
        out: dict = {g: list(pts) for g, pts in self.exceptional.items()}
        out[self.generic] = "all remaining points"
        return out

    def count(self, genus: int) -> int:
        return len(self.exceptional.get(genus, ()))

    def to_json(self) -> dict:
        return {
            "exceptional": {str(g): [str(p) for p in pts] for g, pts in sorted(self.exceptional.items())},
            "counts": {str(g): n for g, n in sorted(self.counts.items())},
            "generic": self.generic,
        }


def genus_spectrum(seq: DefiningSequence) -> GenusReport:
    if seq.is_truncated:
        raise TruncationError("genus spectrum needs a full tower; sequence contains truncations")
    exceptional: dict[int, list[PointAddress]] = {}
    for k, root in enumerate(seq.roots):
        for path, node in iter_nodes(root):
            if node.pinch and node.shape.kind in INFINITE_KINDS:
                g = SIDE_GENUS * pinch_sides(node)
                if g != TORUS_GENUS:
                    exceptional.setdefault(g, []).append(PointAddress(path, PinchPoint(), k))
    return GenusReport({g: tuple(pts) for g, pts in sorted(exceptional.items())})


def half_chain(node: ChainNode, side: int = 1) -> ChainNode:
    """One side of a pinched bi-infinite chain, as a ray accumulating on the same pinch point.

    ``side=1`` keeps ``T_0, T_1, ...``; ``side=-1`` keeps ``T_-1, T_-2, ...``
    re-indexed so that ``T_-1`` becomes position 0.
    """
    if node.shape.kind != BIINFINITE:
        raise ValueError(f"{node.shape} is not a bi-infinite chain")
    p = node.shape.n
    if side == 1:
        slots = node.slots
    elif side == -1:
        slots = tuple(node.slots[(-1 - j) % p] for j in range(p))
    else:
        raise ValueError("side must be 1 or -1")
    return ChainNode(ChainShape.ray(p), slots, pinch=True, knotted=node.knotted)


def restrict(seq: DefiningSequence, path, root: int = 0) -> DefiningSequence:
    """Sub-Cantor set lying inside the torus reached by ``path``."""
    content = navigate(seq, path, root)
    if not isinstance(content, ChainNode):
        raise AddressError(f"path {tuple(path)} does not end on a chain")
    return DefiningSequence.from_root(content)


def rigid_point(path, leaf_rigid, root: int = 0) -> PointAddress:
    return PointAddress(tuple(path), InRigidLeaf(leaf_rigid), root)


def frontier_point(path, root: int = 0) -> PointAddress:
    return PointAddress(tuple(path), TruncationFrontier(), root)
