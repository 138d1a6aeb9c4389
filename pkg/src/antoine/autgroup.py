"""Symmetry groups of labeled chains, uniform towers and rigid composites.

Chain symmetries are the adjacency-preserving slot maps of a chain: the
dihedral group for a cycle, identity and reversal for an open chain, shifts
and reflections for a bi-infinite chain.  Labels (rigid class ids) cut these
down.  When every piece is rigid and the pieces follow the builders' labeling
discipline, the surviving label-preserving maps are exactly the embedding
homogeneity group, and :func:`homogeneity_group` reports it in invariant
factor form.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from math import prod
from typing import Any, Iterable, Sequence

from .errors import DomainError, HypothesisError, ShapeError
from .model import (BIINFINITE, CYCLE, PATH, RAY, ChainNode, ChainShape, DefiningSequence, PointAddress,
                    RigidLeaf, content_key)

ROTATION = "rotation"
REFLECTION = "reflection"


@dataclass(frozen=True)
class ChainSymmetry:
    """Slot map ``i -> i + offset`` (rotation/shift) or ``i -> offset - i`` (reflection).

    ``modulus`` is set for cycles; offsets are then kept reduced.
    """

    kind: str
    offset: int
    modulus: int | None = None

    def __post_init__(self):
        if self.kind not in (ROTATION, REFLECTION):
            raise ValueError(f"unknown symmetry kind {self.kind!r}")
        if self.modulus:
            object.__setattr__(self, "offset", self.offset % self.modulus)

    @classmethod
    def identity(cls, modulus: int | None = None) -> ChainSymmetry:
        return cls(ROTATION, 0, modulus)

    @property
    def is_identity(self) -> bool:
        return self.kind == ROTATION and self.offset == 0

    @property
    def is_reflection(self) -> bool:
        return self.kind == REFLECTION

    def apply(self, i: int) -> int:
        j = i + self.offset if self.kind == ROTATION else self.offset - i
        return j % self.modulus if self.modulus else j

    def __call__(self, i: int) -> int:
        return self.apply(i)

    def compose(self, other: ChainSymmetry) -> ChainSymmetry:
        """``self`` after ``other``."""
        if self.kind == ROTATION:
            kind = other.kind
            offset = self.offset + other.offset
        elif other.kind == ROTATION:
            kind, offset = REFLECTION, self.offset - other.offset
        else:
            kind, offset = ROTATION, self.offset - other.offset
        return ChainSymmetry(kind, offset, self.modulus or other.modulus)

    def inverse(self) -> ChainSymmetry:
        if self.kind == REFLECTION:
            return self
        return ChainSymmetry(ROTATION, -self.offset, self.modulus)

    def power(self, k: int) -> ChainSymmetry:
        if self.kind == REFLECTION:
            return self if k % 2 else ChainSymmetry.identity(self.modulus)
        return ChainSymmetry(ROTATION, self.offset * k, self.modulus)

    def as_permutation(self, n: int) -> tuple[int, ...]:
        return tuple(self.apply(i) % n for i in range(n))

    def to_json(self) -> dict:
        return {"kind": self.kind, "offset": self.offset}

    def __str__(self) -> str:
        return f"{'rot' if self.kind == ROTATION else 'refl'} {self.offset}"


def _candidates(shape: ChainShape) -> list[ChainSymmetry]:
    """All adjacency-preserving slot maps of a finite chain."""
    n = shape.n
    if shape.kind == CYCLE:
        out = [ChainSymmetry(ROTATION, t, n) for t in range(n)]
        out += [ChainSymmetry(REFLECTION, c, n) for c in range(n)]
        return _dedupe(out, n)
    if shape.kind == PATH:
        out = [ChainSymmetry.identity()]
        if n > 1:
            out.append(ChainSymmetry(REFLECTION, n - 1))
        return out
    raise ShapeError(f"{shape} is not finite")


def _dedupe(cands: list[ChainSymmetry], n: int) -> list[ChainSymmetry]:
    # cycles of length <= 2 realize some rotations and reflections as the same map
    seen, out = set(), []
    for s in cands:
        perm = s.as_permutation(n)
        if perm not in seen:
            seen.add(perm)
            out.append(s)
    return out


def _preserves_adjacency(shape: ChainShape, sym: ChainSymmetry) -> bool:
    edges = {frozenset(e) for e in shape.edges()}
    return {frozenset((sym(a), sym(b))) for a, b in shape.edges()} == edges


@dataclass(frozen=True)
class SymmetrySet:
    """Label-preserving chain symmetries.

    Finite chains list their ``elements``.  Infinite chains are described
    symbolically: shifts form ``shift_step * Z`` and reflection ``i -> c - i``
    is allowed exactly when ``c mod period`` lies in ``reflection_axes``.
    """

    shape: ChainShape
    elements: tuple = ()
    shift_step: int = 0
    reflection_axes: tuple = ()

    @property
    def is_finite(self) -> bool:
        return self.shape.kind != BIINFINITE

    @property
    def order(self) -> int | None:
        if self.shape.kind == BIINFINITE:
            return None
        return len(self.elements)

    @property
    def has_reflections(self) -> bool:
        if self.shape.kind == BIINFINITE:
            return bool(self.reflection_axes)
        return any(s.is_reflection for s in self.elements)

    def __iter__(self):
        if not self.is_finite:
            raise TypeError("infinite symmetry set cannot be enumerated")
        return iter(self.elements)

    def __len__(self) -> int:
        if not self.is_finite:
            raise TypeError("infinite symmetry set has no length")
        return len(self.elements)

    def __contains__(self, sym: ChainSymmetry) -> bool:
        if self.shape.kind == BIINFINITE:
            if sym.kind == ROTATION:
                return sym.offset == 0 if not self.shift_step else sym.offset % self.shift_step == 0
            return sym.offset % self.shape.n in self.reflection_axes
        return sym in self.elements

    def generator(self) -> ChainSymmetry | None:
        """Generator of the rotation/shift part, or None if it is trivial."""
        if self.shape.kind == BIINFINITE:
            return ChainSymmetry(ROTATION, self.shift_step) if self.shift_step else None
        rots = [s.offset for s in self.elements if s.kind == ROTATION and s.offset]
        if not rots:
            return None
        return ChainSymmetry(ROTATION, min(rots), self.shape.n if self.shape.kind == CYCLE else None)

    def reflection(self) -> ChainSymmetry | None:
        if self.shape.kind == BIINFINITE:
            return ChainSymmetry(REFLECTION, self.reflection_axes[0]) if self.reflection_axes else None
        return next((s for s in self.elements if s.is_reflection), None)

    def descriptor(self) -> GroupDescriptor:
        if self.shape.kind == BIINFINITE:
            if not self.shift_step:
                return GroupDescriptor.abelian_group(FgAbelianGroup(0, ()))
            if self.has_reflections:
                return GroupDescriptor("infinite-nonabelian", description="infinite dihedral group")
            return GroupDescriptor.abelian_group(FgAbelianGroup(1, ()))
        order = len(self.elements)
        if not self.has_reflections:
            return GroupDescriptor.abelian_group(canonical_invariants(0, [order] if order > 1 else []))
        if order == 2:
            return GroupDescriptor.abelian_group(FgAbelianGroup(0, (2,)))
        if order == 4:
            return GroupDescriptor.abelian_group(FgAbelianGroup(0, (2, 2)))
        gens = [NamedGenerator(str(s), (), s) for s in (self.generator(), self.reflection()) if s is not None]
        return GroupDescriptor("finite", order=order, generators=tuple(gens),
                               description=f"dihedral group of order {order}")


def chain_automorphisms(shape: ChainShape, labels: Sequence[Any]) -> SymmetrySet:
    """Adjacency- and label-preserving symmetries of a labeled chain.

    ``labels`` gives one token per slot; for infinite chains one token per
    residue class mod the period.
    """
    labels = list(labels)
    n = shape.n
    if len(labels) != n:
        raise ValueError(f"{shape} needs {n} labels, got {len(labels)}")
    if shape.kind == BIINFINITE:
        shifts = [t for t in range(1, n + 1) if all(labels[(i + t) % n] == labels[i] for i in range(n))]
        axes = tuple(c for c in range(n) if all(labels[(c - i) % n] == labels[i] for i in range(n)))
        return SymmetrySet(shape, shift_step=min(shifts) if n else 0, reflection_axes=axes)
    if shape.kind == RAY:
        return SymmetrySet(shape, elements=(ChainSymmetry.identity(),))
    kept = [s for s in _candidates(shape)
            if _preserves_adjacency(shape, s) and all(labels[s(i)] == labels[i] for i in range(n))]
    return SymmetrySet(shape, elements=tuple(kept))


def node_automorphisms(node: ChainNode) -> SymmetrySet:
    """Chain symmetries of ``node`` that carry each slot to a slot with identical content."""
    return chain_automorphisms(node.shape, node.labels())


# ---------------------------------------------------------------------------
# finitely generated abelian groups


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class FgAbelianGroup:
    """``Z^rank + Z/d_1 + ... + Z/d_k`` with ``d_1 | d_2 | ... | d_k`` and every ``d_i >= 2``."""

    rank: int
    invariant_factors: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "invariant_factors", tuple(self.invariant_factors))
        if self.rank < 0:
            raise DomainError(f"rank must be non-negative, got {self.rank}")
        ds = self.invariant_factors
        if any(d < 2 for d in ds):
            raise DomainError(f"invariant factors must be >= 2, got {list(ds)}")
        if any(b % a for a, b in zip(ds, ds[1:])):
            raise DomainError(f"invariant factors must form a divisibility chain, got {list(ds)}")

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.invariant_factors

    @property
    def order(self) -> int | None:
        return None if self.rank else prod(self.invariant_factors)

    def to_json(self) -> dict:
        return {"rank": self.rank, "factors": list(self.invariant_factors)}

    def __str__(self) -> str:
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts += [f"Z/{d}" for d in self.invariant_factors]
        return " x ".join(parts) or "0"


def canonical_invariants(rank: int, torsion: Iterable[int]) -> FgAbelianGroup:
    """Invariant factor form of ``Z^rank + Z/m_1 + ... + Z/m_k``."""
    torsion = list(torsion)
    if rank < 0:
        raise DomainError(f"rank must be non-negative, got {rank}")
    bad = [m for m in torsion if not isinstance(m, int) or m < 2]
    if bad:
        raise DomainError(f"torsion orders must be integers >= 2, got {bad}")
    powers: dict[int, list[int]] = defaultdict(list)
    for m in torsion:
        for p, e in _factorize(m).items():
            powers[p].append(p ** e)
    k = max((len(v) for v in powers.values()), default=0)
    factors = [1] * k
    for v in powers.values():
        v.sort(reverse=True)
        for j, q in enumerate(v):
            factors[k - 1 - j] *= q
    return FgAbelianGroup(rank, tuple(factors))


def group_isomorphic(a: FgAbelianGroup, b: FgAbelianGroup) -> bool:
    return a.rank == b.rank and a.invariant_factors == b.invariant_factors


# ---------------------------------------------------------------------------
# group descriptors


@dataclass(frozen=True)
class NamedGenerator:
    """A generator acting by ``symmetry`` on the chain at ``component`` (a slot path)."""

    name: str
    component: tuple
    symmetry: ChainSymmetry
    order: int | None = None

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "component": list(self.component),
            "symmetry": self.symmetry.to_json(),
            "order": self.order,
        }


@dataclass(frozen=True)
class GroupDescriptor:
    """A computed symmetry group.

    ``kind`` is ``"abelian"`` (see ``abelian``), ``"finite"`` (see ``order``)
    or ``"infinite-nonabelian"``.  ``upper_bound`` marks purely combinatorial
    groups not known to equal the embedding homogeneity group.
    """

    kind: str
    abelian: FgAbelianGroup | None = None
    order: int | None = None
    generators: tuple = ()
    description: str = ""
    upper_bound: bool = False

    @classmethod
    def abelian_group(cls, group: FgAbelianGroup, generators: Sequence[NamedGenerator] = (),
                      description: str = "") -> GroupDescriptor:
        return cls("abelian", group, group.order, tuple(generators), description or str(group))

    def to_json(self) -> dict:
        if self.kind == "abelian":
            d: dict = self.abelian.to_json()
        elif self.kind == "finite":
            d = {"order": str(self.order)}
        else:
            d = {"infinite": True}
        d["generators"] = [g.to_json() for g in self.generators]
        d["description"] = self.description
        if self.upper_bound:
            d["upper_bound"] = True
        return d

    def __str__(self) -> str:
        if self.kind == "abelian":
            return str(self.abelian)
        if self.kind == "finite":
            return f"finite group of order {self.order}"
        return self.description or "infinite non-abelian group"


# ---------------------------------------------------------------------------
# uniform towers


def _uniform_levels(node: ChainNode, depth: int) -> ChainShape:
    if depth < 1:
        raise ShapeError("tower depth must be at least 1")
    shape = node.shape
    if not shape.is_finite:
        raise ShapeError(f"uniform towers need finite chains, got {shape}")
    frontier = [node]
    for level in range(depth):
        for n in frontier:
            if n.shape != shape:
                raise ShapeError(f"stage {level + 1} has {n.shape}, expected {shape}")
            if len(n.slots) != shape.n:
                raise ShapeError(f"stage {level + 1} chain stores {len(n.slots)} slots")
        contents = [c for n in frontier for c in n.slots]
        if level < depth - 1:
            if not all(isinstance(c, ChainNode) for c in contents):
                raise ShapeError(f"tower ends before depth {depth}")
            frontier = contents
        elif len({content_key(c) for c in contents}) != 1:
            raise ShapeError(f"stage {depth} contents are not uniform")
    return shape


def tower_order(chain_order: int, width: int, depth: int) -> int:
    """``|Aut(d)| = chain_order * |Aut(d - 1)|^width``, ``|Aut(1)| = chain_order``."""
    order = chain_order
    for _ in range(depth - 1):
        order = chain_order * order ** width
    return order


def tower_automorphisms(node: ChainNode, depth: int) -> GroupDescriptor:
    """Combinatorial automorphism group of a uniform tower cut off after ``depth`` stages.

    Every stage may apply its own chain symmetry independently inside each
    torus, so the group is an iterated wreath product of the chain group.
    It contains every action on the tower that ambient homeomorphisms can
    induce, hence is reported as an upper bound.
    """
    shape = _uniform_levels(node, depth)
    chain = chain_automorphisms(shape, [0] * shape.n)
    gens = []
    rot = chain.generator()
    refl = chain.reflection()
    for level in range(depth):
        where = (0,) * level
        tag = ".".join(map(str, where)) or "root"
        if rot is not None:
            gens.append(NamedGenerator(f"rot@{tag}", where, rot, shape.n))
        if refl is not None:
            gens.append(NamedGenerator(f"refl@{tag}", where, refl, 2))
    order = tower_order(chain.order, shape.n, depth)
    return GroupDescriptor("finite", order=order, generators=tuple(gens), upper_bound=True,
                           description=f"iterated wreath product of {len(chain)}-element chain group, {depth} stage(s)")


def tower_points(width: int, depth: int) -> list[tuple[int, ...]]:
    """Slot paths of all tori on stages 1..depth of a uniform tower."""
    pts: list[tuple[int, ...]] = []
    level: list[tuple[int, ...]] = [()]
    for _ in range(depth):
        level = [p + (i,) for p in level for i in range(width)]
        pts.extend(level)
    return pts


def act_on_path(gen: NamedGenerator, path: tuple, power: int = 1) -> tuple:
    """Image of a slot path under ``gen**power``; paths outside the generator's chain are fixed."""
    k = len(gen.component)
    if len(path) <= k or tuple(path[:k]) != gen.component:
        return tuple(path)
    sym = gen.symmetry.power(power) if power >= 0 else gen.symmetry.inverse().power(-power)
    return tuple(path[:k]) + (sym(path[k]),) + tuple(path[k + 1:])


def act_on_address(gen: NamedGenerator, address: PointAddress, power: int = 1) -> PointAddress:
    return PointAddress(act_on_path(gen, address.path, power), address.terminal, address.root)


def generator_permutations(gens: Sequence[NamedGenerator], width: int, depth: int):
    """Realize tower generators as permutations of :func:`tower_points`."""
    pts = tower_points(width, depth)
    pos = {p: i for i, p in enumerate(pts)}
    return pts, [tuple(pos[act_on_path(g, p)] for p in pts) for g in gens]


def enumerate_group(perms: Sequence[tuple[int, ...]], limit: int = 10 ** 6) -> set[tuple[int, ...]]:
    """All products of the given permutations (breadth-first closure)."""
    if not perms:
        return set()
    ident = tuple(range(len(perms[0])))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for s in perms:
                h = tuple(s[x] for x in g)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
                    if len(seen) > limit:
                        raise OverflowError(f"group exceeds {limit} elements")
        frontier = nxt
    return seen


# ---------------------------------------------------------------------------
# embedding homogeneity groups of rigid composites


def _rigid_components(seq: DefiningSequence) -> list[tuple[tuple, ChainNode]]:
    if seq.extra_roots:
        raise HypothesisError("several unlinked root chains; the rigid-tower reduction needs one")
    if seq.is_truncated:
        raise HypothesisError("truncated sequence; use tower_automorphisms for finite approximations")
    root = seq.root

    def is_component(n: ChainNode) -> bool:
        return all(isinstance(c, RigidLeaf) for c in n.slots)

    if is_component(root):
        return [((), root)]
    if root.shape.is_finite and all(isinstance(c, ChainNode) and is_component(c) for c in root.slots):
        return [((i,), c) for i, c in enumerate(root.slots)]
    raise HypothesisError("not a rigid tower: stage-1 tori of each component must carry rigid pieces")


def _check_discipline(path: tuple, node: ChainNode):
    labels = [c.rigid.id for c in node.slots]
    q = len(set(labels))
    where = ".".join(map(str, path)) or "root"
    if q < 3 or node.shape.n % q:
        raise HypothesisError(
            f"component {where}: labels must repeat one block of >= 3 distinct rigid classes "
            f"(found {q} classes on {node.shape})")
    for i, lab in enumerate(labels):
        if lab != labels[i % q]:
            raise HypothesisError(f"component {where}: slot {i} breaks the period-{q} labeling")
    if len(set(labels[:q])) != q:
        raise HypothesisError(f"component {where}: a labeling period repeats a rigid class")


def homogeneity_group(seq: DefiningSequence) -> GroupDescriptor:
    """Embedding homogeneity group of a rigid composite, in invariant factor form.

    Requires a single root whose stage-1 tori all carry rigid pieces, or a
    finite chain of such components.  Within a component the rigid classes
    must repeat a block of at least three distinct classes, and different
    components must share no class.
    """
    comps = _rigid_components(seq)
    seen: dict[str, tuple] = {}
    for path, node in comps:
        _check_discipline(path, node)
        for c in node.slots:
            other = seen.setdefault(c.rigid.id, path)
            if other != path:
                raise HypothesisError(f"rigid class {c.rigid.id!r} used by two components")

    if len(comps) > 1:
        super_labels = [frozenset(c.rigid.id for c in node.slots) for _, node in comps]
        outer = chain_automorphisms(seq.root.shape, super_labels)
        if any(not s.is_identity for s in outer.elements):
            raise HypothesisError("components can be permuted; labels are not rigid enough")

    rank = 0
    torsion = []
    gens = []
    for k, (path, node) in enumerate(comps):
        syms = node_automorphisms(node)
        if syms.has_reflections:
            raise HypothesisError(f"component {path} admits a reflection")
        g = syms.generator()
        if g is None:
            continue
        suffix = f"_{k + 1}" if len(comps) > 1 else ""
        if syms.shape.kind == BIINFINITE:
            rank += 1
            gens.append(NamedGenerator(f"alpha{suffix}", path, g, None))
        else:
            order = syms.order
            torsion.append(order)
            gens.append(NamedGenerator(f"h{suffix}", path, g, order))
    group = canonical_invariants(rank, torsion)
    parts = ["Z"] * rank + [f"Z_{m}" for m in torsion]
    desc = " + ".join(parts) if parts else "trivial"
    return GroupDescriptor.abelian_group(group, gens, desc)
