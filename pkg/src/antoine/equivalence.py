"""Stage-by-stage equivalence of defining sequences and the splitting test.

Two Antoine-type Cantor sets are equivalently embedded exactly when their
defining sequences can be matched stage by stage.  Combinatorially that is
a recursive search: at every chain, try each adjacency-preserving slot map
and require all slot contents to match under it.  A successful search
returns a :class:`MatchCertificate` recording the chosen map at every chain.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from math import lcm
from typing import Union

from .autgroup import REFLECTION, ROTATION, ChainSymmetry, _candidates
from .errors import TruncationError
from .model import (BIINFINITE, INFINITE_KINDS, RAY, ChainNode, ChainShape, DefiningSequence, RigidLeaf,
                    Truncation, content_key, iter_nodes)


@dataclass(frozen=True)
class NodeMatch:
    """Slot map of one chain plus the matches of its sub-chains, keyed by source slot."""

    shape: ChainShape
    symmetry: ChainSymmetry
    children: tuple = ()

    def child(self, slot: int) -> NodeMatch | None:
        if self.shape.kind in INFINITE_KINDS:
            slot %= self.shape.n
        for i, m in self.children:
            if i == slot:
                return m
        return None

    def _target(self, i: int) -> int:
        return self.shape.residue(self.symmetry(i))

    def inverse(self) -> NodeMatch:
        kids = tuple(sorted((self._target(i), m.inverse()) for i, m in self.children))
        return NodeMatch(self.shape, self.symmetry.inverse(), kids)

    def then(self, other: NodeMatch) -> NodeMatch:
        """Match A -> C from ``self`` (A -> B) followed by ``other`` (B -> C)."""
        shape = self.shape
        if shape.kind in INFINITE_KINDS:
            # the two matches may be keyed over different common periods
            shape = ChainShape(shape.kind, lcm(self.shape.n, other.shape.n))
        kids = []
        for i in range(shape.n):
            m = self.child(i)
            if m is not None:
                kids.append((i, m.then(other.child(self.symmetry(i)))))
        return NodeMatch(shape, other.symmetry.compose(self.symmetry), tuple(kids))

    @property
    def is_identity(self) -> bool:
        return self.symmetry.is_identity and all(m.is_identity for _, m in self.children)

    def to_json(self) -> dict:
        d: dict = {"shape": str(self.shape), "map": self.symmetry.to_json()}
        if self.children:
            d["children"] = {str(i): m.to_json() for i, m in self.children}
        return d


@dataclass(frozen=True)
class MatchCertificate:
    """Witness of equivalence: root ``k`` of A goes to root ``root_map[k]`` of B via ``roots[k]``."""

    root_map: tuple
    roots: tuple

    def __bool__(self) -> bool:
        return True

    @property
    def is_identity(self) -> bool:
        return all(k == j for k, j in enumerate(self.root_map)) and all(m.is_identity for m in self.roots)

    def inverse(self) -> MatchCertificate:
        inv_map = [0] * len(self.root_map)
        inv_roots = [None] * len(self.root_map)
        for k, j in enumerate(self.root_map):
            inv_map[j] = k
            inv_roots[j] = self.roots[k].inverse()
        return MatchCertificate(tuple(inv_map), tuple(inv_roots))

    def then(self, other: MatchCertificate) -> MatchCertificate:
        return MatchCertificate(
            tuple(other.root_map[j] for j in self.root_map),
            tuple(m.then(other.roots[j]) for m, j in zip(self.roots, self.root_map)),
        )

    def to_json(self) -> dict:
        return {"equivalent": True, "root_map": list(self.root_map), "stages": [m.to_json() for m in self.roots]}


@dataclass(frozen=True)
class Inequivalent:
    reason: str

    def __bool__(self) -> bool:
        return False

    def to_json(self) -> dict:
        return {"equivalent": False, "reason": self.reason}


MatchResult = Union[MatchCertificate, Inequivalent]


def _infinite_candidates(kind: str, span: int) -> list[ChainSymmetry]:
    # both chains repeat with period dividing ``span``, so offsets mod span cover every map
    if kind == RAY:
        return [ChainSymmetry.identity()]
    return [ChainSymmetry(ROTATION, t) for t in range(span)] + [ChainSymmetry(REFLECTION, c) for c in range(span)]


class _Matcher:
    def __init__(self):
        self.memo: dict = {}

    def content(self, a, b, stage: int):
        """True / NodeMatch on success, a reason string on failure."""
        if isinstance(a, Truncation) or isinstance(b, Truncation):
            if isinstance(a, Truncation) and isinstance(b, Truncation):
                return True
            raise TruncationError(f"stage {stage}: one sequence is truncated where the other continues")
        if isinstance(a, RigidLeaf) and isinstance(b, RigidLeaf):
            if a.rigid == b.rigid:
                return True
            return f"stage {stage}: rigid pieces {a.rigid.name} and {b.rigid.name} are inequivalent"
        if isinstance(a, ChainNode) and isinstance(b, ChainNode):
            return self.node(a, b, stage + 1)
        return f"stage {stage}: a rigid piece faces a further chain"

    def node(self, a: ChainNode, b: ChainNode, stage: int):
        key = (a.key, b.key, stage)
        if key not in self.memo:
            self.memo[key] = self._node(a, b, stage)
        return self.memo[key]

    def _node(self, a: ChainNode, b: ChainNode, stage: int):
        if a.shape.kind != b.shape.kind:
            return f"stage-{stage} chain shapes differ: {a.shape} vs {b.shape}"
        if a.shape.is_finite and a.shape.n != b.shape.n:
            return f"stage-{stage} component counts {a.shape.n} ≠ {b.shape.n}"
        if a.pinch != b.pinch or a.knotted != b.knotted:
            return f"stage {stage}: pinch/knot markers differ"
        if any(isinstance(c, Truncation) for c in a.slots) != any(isinstance(c, Truncation) for c in b.slots):
            raise TruncationError(f"stage {stage}: one sequence is truncated where the other continues")
        if a.shape.is_finite:
            span = a.shape.n
            shape = a.shape
            cands = _candidates(shape)
        else:
            # compare infinite chains over a common period; equivalent contents may be stored differently
            span = lcm(len(a.slots), len(b.slots))
            shape = ChainShape(a.shape.kind, span)
            cands = _infinite_candidates(shape.kind, span)
        shallow = lambda c: repr(c.shape.kind if isinstance(c, ChainNode) else content_key(c))
        ka = sorted(shallow(a.slot(i)) for i in range(span))
        kb = sorted(shallow(b.slot(i)) for i in range(span))
        if ka != kb:
            return f"stage {stage}: slot contents of {a.shape} and {b.shape} differ"
        first_reason = None
        for sym in cands:
            kids = []
            for i in range(span):
                r = self.content(a.slot(i), b.slot(sym(i)), stage)
                if isinstance(r, str):
                    first_reason = first_reason or r
                    break
                if isinstance(r, NodeMatch):
                    kids.append((i, r))
            else:
                return NodeMatch(shape, sym, tuple(kids))
        return f"stage {stage}: no adjacency- and label-preserving alignment of {shape} ({first_reason})"


def sher_equivalent(a: DefiningSequence, b: DefiningSequence) -> MatchResult:
    """Decide whether ``a`` and ``b`` match stage by stage; return a certificate or the reason not."""
    if len(a.roots) != len(b.roots):
        return Inequivalent(f"root chain counts {len(a.roots)} ≠ {len(b.roots)}")
    m = _Matcher()
    first_reason = None
    for perm in permutations(range(len(b.roots))):
        matches = []
        for k, j in enumerate(perm):
            r = m.node(a.roots[k], b.roots[j], 1)
            if isinstance(r, str):
                first_reason = first_reason or r
                break
            matches.append(r)
        else:
            return MatchCertificate(tuple(perm), tuple(matches))
    return Inequivalent(first_reason)


# ---------------------------------------------------------------------------
# splitting


@dataclass(frozen=True)
class SplitCertificate:
    """Why a Cantor set is (un)splittable.

    For unsplittable sets ``chains`` lists every chain with its connected
    linking graph and ``closures`` the closing tori used for infinite chains.
    For splittable ones ``bipartition`` gives two groups of root chains that a
    2-sphere separates.
    """

    unsplittable: bool
    chains: tuple = ()
    closures: tuple = ()
    bipartition: tuple | None = None

    def to_json(self) -> dict:
        d: dict = {"unsplittable": self.unsplittable, "chains": list(self.chains)}
        if self.closures:
            d["closures"] = list(self.closures)
        if self.bipartition is not None:
            d["bipartition"] = [list(side) for side in self.bipartition]
        return d


def _components(n: int, edges) -> list[set[int]]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        parent[find(u)] = find(v)
    groups: dict[int, set[int]] = {}
    for x in range(n):
        groups.setdefault(find(x), set()).add(x)
    return sorted(groups.values(), key=min)


def is_unsplittable(seq: DefiningSequence) -> tuple[bool, SplitCertificate]:
    """No 2-sphere separates the Cantor set iff every chain's linking graph is connected.

    An infinite chain is closed up by one extra torus linked to ``T_-N`` and
    ``T_N``, turning ``T_-N .. T_N`` into an ordinary necklace.
    """
    roots = _components(len(seq.roots), [])
    if len(roots) > 1:
        first = tuple(f"root{k}" for k in sorted(roots[0]))
        rest = tuple(f"root{k}" for g in roots[1:] for k in sorted(g))
        return False, SplitCertificate(False, bipartition=(first, rest))
    chains, closures = [], []
    for k, root in enumerate(seq.roots):
        for path, node in iter_nodes(root):
            where = ".".join(map(str, path)) or "root"
            shape = node.shape
            if shape.kind == BIINFINITE:
                # T_-N .. T_N plus one closing torus linked to T_-N and T_N
                window = 2 * shape.n + 1
                graph = [(i, i + 1) for i in range(window - 1)] + [(window - 1, window), (window, 0)]
                size = window + 1
                closures.append(f"{where}: closing torus linked to T_-{shape.n} and T_{shape.n} "
                                f"makes a necklace of {size} tori")
            elif shape.kind == RAY:
                size = shape.n + 1
                graph = [(i, i + 1) for i in range(size - 1)]
                closures.append(f"{where}: T_0 .. T_{shape.n} form an open chain")
            else:
                graph, size = shape.edges(), shape.n
            parts = _components(size, graph)
            if len(parts) != 1:
                return False, SplitCertificate(False, tuple(chains), tuple(closures),
                                               (tuple(sorted(parts[0])), tuple(sorted(set().union(*parts[1:])))))
            chains.append(f"{where}: {shape} linking graph connected")
    return True, SplitCertificate(True, tuple(chains), tuple(closures))
