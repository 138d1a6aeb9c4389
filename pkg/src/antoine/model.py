"""Combinatorial data model for Antoine-type defining sequences.

A defining sequence is stored as a rooted tree.  Every internal node is a
chain of linked solid tori (:class:`ChainNode`); each slot of the chain holds
either the chain placed inside that torus at the next stage, an opaque rigid
Cantor set (:class:`RigidLeaf`), or a :class:`Truncation` marker when the tree
is only a finite approximation of an infinite tower.

Infinite chains are stored as one period of slot contents.  A bi-infinite
chain ``... T_-1, T_0, T_1 ...`` accumulates on a pinch point ``w`` from both
sides; a ray ``T_0, T_1, ...`` accumulates on it from one side only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterator, Union

from .errors import AddressError, PathError, SerializationError

CYCLE = "cycle"
PATH = "path"
BIINFINITE = "biinfinite"
RAY = "ray"

FINITE_KINDS = (CYCLE, PATH)
INFINITE_KINDS = (BIINFINITE, RAY)

MIN_CYCLE = 4
MIN_PERIOD = 3


@dataclass(frozen=True, order=True)
class RigidClass:
    """Opaque stand-in for a rigidly embedded Antoine Cantor set.

    Two classes are equivalently embedded iff their ids agree; the display
    name is cosmetic and ignored by comparisons.
    """

    id: str
    display_name: str = field(default="", compare=False)

    @property
    def name(self) -> str:
        return self.display_name or self.id


@dataclass(frozen=True)
class ChainShape:
    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in FINITE_KINDS + INFINITE_KINDS:
            raise ValueError(f"unknown chain kind {self.kind!r}")
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 0:
            raise ValueError(f"chain size must be a non-negative int, got {self.n!r}")

    @classmethod
    def cycle(cls, n: int) -> ChainShape:
        return cls(CYCLE, n)

    @classmethod
    def path(cls, n: int) -> ChainShape:
        return cls(PATH, n)

    @classmethod
    def biinfinite(cls, period: int) -> ChainShape:
        return cls(BIINFINITE, period)

    @classmethod
    def ray(cls, period: int) -> ChainShape:
        return cls(RAY, period)

    @property
    def is_finite(self) -> bool:
        return self.kind in FINITE_KINDS

    @property
    def period(self) -> int:
        return self.n

    def residue(self, i: int) -> int:
        """Storage index of chain position ``i``; raises PathError if ``i`` is not a position."""
        if not isinstance(i, int) or isinstance(i, bool):
            raise PathError(f"slot index must be an int, got {i!r}")
        if self.kind == BIINFINITE:
            return i % self.n
        if self.kind == RAY:
            if i < 0:
                raise PathError(f"ray positions start at 0, got {i}")
            return i % self.n
        if not 0 <= i < self.n:
            raise PathError(f"slot {i} out of range for {self}")
        return i

    def linked(self, i: int, j: int) -> bool:
        """Whether chain positions ``i`` and ``j`` are linked (adjacent)."""
        if self.kind == CYCLE:
            d = (i - j) % self.n
            return self.n > 1 and d in (1, self.n - 1) and i != j
        if self.kind == PATH:
            return 0 <= min(i, j) and max(i, j) < self.n and abs(i - j) == 1
        if self.kind == RAY:
            return min(i, j) >= 0 and abs(i - j) == 1
        return abs(i - j) == 1

    def neighbors(self, i: int) -> tuple[int, ...]:
        self.residue(i)
        if self.kind == CYCLE:
            return tuple(sorted({(i - 1) % self.n, (i + 1) % self.n} - {i}))
        cand = (i - 1, i + 1)
        if self.kind == PATH:
            return tuple(j for j in cand if 0 <= j < self.n)
        if self.kind == RAY:
            return tuple(j for j in cand if j >= 0)
        return cand

    def edges(self) -> list[tuple[int, int]]:
        """Linking edges among the stored slots (one period for infinite chains)."""
        if self.kind == CYCLE:
            if self.n < 3:
                return [(0, 1)] if self.n == 2 else []
            return [(i, (i + 1) % self.n) for i in range(self.n)]
        return [(i, i + 1) for i in range(self.n - 1)]

    def __str__(self) -> str:
        names = {CYCLE: "Cycle", PATH: "Path", BIINFINITE: "BiInfinite", RAY: "Ray"}
        return f"{names[self.kind]}({self.n})"


@dataclass(frozen=True)
class RigidLeaf:
    rigid: RigidClass


@dataclass(frozen=True)
class Truncation:
    """Placeholder for the unexpanded remainder of a finite approximation."""


@dataclass(frozen=True, eq=False)
class ChainNode:
    """A chain of linked solid tori sitting inside one torus of the previous stage.

    ``slots`` holds ``shape.n`` contents.  For infinite chains this is one
    period: position ``i`` carries ``slots[i % period]``.
    """

    shape: ChainShape
    slots: tuple
    pinch: bool = False
    knotted: bool = False

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple(self.slots))

    def slot(self, i: int) -> SlotContent:
        r = self.shape.residue(i)
        if r >= len(self.slots):
            raise PathError(f"slot {i} missing: node stores {len(self.slots)} slots")
        return self.slots[r]

    def labels(self) -> list[Any]:
        """One hashable token per stored slot; equal tokens mean equivalent contents."""
        return [content_key(c) for c in self.slots]

    @cached_property
    def key(self) -> str:
        return json.dumps(node_to_dict(self), sort_keys=True, separators=(",", ":"))

    def __eq__(self, other):
        if not isinstance(other, ChainNode):
            return NotImplemented
        return self is other or self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self) -> str:
        extra = ", pinch" if self.pinch else ""
        return f"ChainNode({self.shape}{extra}, {len(self.slots)} slots)"


SlotContent = Union[ChainNode, RigidLeaf, Truncation]


def content_key(content: SlotContent) -> Any:
    if isinstance(content, RigidLeaf):
        return ("rigid", content.rigid.id)
    if isinstance(content, Truncation):
        return ("truncated",)
    return ("node", content.key)


@dataclass(frozen=True)
class DefiningSequence:
    """A defining sequence: root chain(s) plus the declared rigid universe.

    ``extra_roots`` models additional, mutually unlinked chains.  The builders
    always produce a single root; several roots only arise as test inputs
    for the splitting check.
    """

    root: ChainNode
    universe: frozenset = frozenset()
    approximate: bool = False
    extra_roots: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "universe", frozenset(self.universe))
        object.__setattr__(self, "extra_roots", tuple(self.extra_roots))

    @classmethod
    def from_root(cls, root: ChainNode, approximate: bool | None = None) -> DefiningSequence:
        """Wrap ``root`` with the universe of rigid classes it uses."""
        universe = {leaf.rigid for _, leaf in iter_leaves(root)}
        if approximate is None:
            approximate = has_truncation(root)
        return cls(root, frozenset(universe), approximate)

    @property
    def roots(self) -> tuple[ChainNode, ...]:
        return (self.root,) + self.extra_roots

    @property
    def is_truncated(self) -> bool:
        return any(has_truncation(r) for r in self.roots)


# ---------------------------------------------------------------------------
# point addresses


@dataclass(frozen=True)
class InRigidLeaf:
    rigid: RigidClass
    sub: tuple = ()


@dataclass(frozen=True)
class PinchPoint:
    pass


@dataclass(frozen=True)
class TruncationFrontier:
    pass


Terminal = Union[InRigidLeaf, PinchPoint, TruncationFrontier]


@dataclass(frozen=True)
class PointAddress:
    """Symbolic name of a point of the Cantor set.

    ``path`` walks slot indices from the root; ``terminal`` says what is found
    at the end: a point inside a rigid piece (``sub`` is an opaque address
    within it), the pinch point of the infinite chain the path ends on, or the
    frontier of a truncated approximation.
    """

    path: tuple = ()
    terminal: Terminal = PinchPoint()
    root: int = 0

    def __post_init__(self):
        object.__setattr__(self, "path", tuple(self.path))

    def __str__(self) -> str:
        steps = ".".join(str(i) for i in self.path) or "root"
        if self.root:
            steps = f"[{self.root}]{steps}"
        if isinstance(self.terminal, InRigidLeaf):
            return f"{steps}:{self.terminal.rigid.name}"
        if isinstance(self.terminal, PinchPoint):
            return f"{steps}:w"
        return f"{steps}:..."


# ---------------------------------------------------------------------------
# traversal


def iter_nodes(node: ChainNode, path: tuple = ()) -> Iterator[tuple[tuple, ChainNode]]:
    """Yield ``(path, node)`` for ``node`` and every chain below it (one period of infinite chains)."""
    yield path, node
    for i, c in enumerate(node.slots):
        if isinstance(c, ChainNode):
            yield from iter_nodes(c, path + (i,))


def iter_leaves(node: ChainNode, path: tuple = ()) -> Iterator[tuple[tuple, RigidLeaf]]:
    for p, n in iter_nodes(node, path):
        for i, c in enumerate(n.slots):
            if isinstance(c, RigidLeaf):
                yield p + (i,), c


def has_truncation(node: ChainNode) -> bool:
    return any(isinstance(c, Truncation) for _, n in iter_nodes(node) for c in n.slots)


def depth(node: ChainNode) -> int:
    """Number of chain stages below and including ``node``."""
    sub = [depth(c) for c in node.slots if isinstance(c, ChainNode)]
    return 1 + max(sub, default=0)


def navigate(seq: DefiningSequence, path, root: int = 0) -> SlotContent:
    """Content reached by following ``path`` from the chosen root."""
    try:
        content: SlotContent = seq.roots[root]
    except IndexError:
        raise PathError(f"no root {root}") from None
    for step, i in enumerate(path):
        if not isinstance(content, ChainNode):
            raise PathError(f"step {step} descends into a {type(content).__name__}")
        content = content.slot(i)
    return content


def resolve(seq: DefiningSequence, address: PointAddress) -> SlotContent:
    """Check that ``address`` names a point of ``seq``; return the content it ends on."""
    try:
        content = navigate(seq, address.path, address.root)
    except PathError as exc:
        raise AddressError(f"{address}: {exc}") from exc
    term = address.terminal
    if isinstance(term, InRigidLeaf):
        if not isinstance(content, RigidLeaf) or content.rigid != term.rigid:
            raise AddressError(f"{address}: no rigid piece {term.rigid.id!r} there")
    elif isinstance(term, PinchPoint):
        if not (isinstance(content, ChainNode) and content.pinch):
            raise AddressError(f"{address}: path does not end on a pinched chain")
    elif isinstance(term, TruncationFrontier):
        if not isinstance(content, Truncation):
            raise AddressError(f"{address}: path does not end on a truncation")
    else:
        raise AddressError(f"unknown terminal {term!r}")
    return content


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    path: tuple
    code: str
    message: str

    def __str__(self) -> str:
        where = ".".join(map(str, self.path)) or "root"
        return f"{where}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> set[str]:
        return {v.code for v in self.violations}

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "\n".join(str(v) for v in self.violations)


def _node_violations(node: ChainNode, path: tuple, ids: set, approximate: bool, inside_infinite: bool):
    shape = node.shape
    out = []
    if shape.kind == CYCLE and shape.n < MIN_CYCLE:
        out.append(Violation(path, "cycle-too-short", f"cycle length < {MIN_CYCLE} (got {shape.n})"))
    elif shape.kind == PATH and shape.n < 1:
        out.append(Violation(path, "empty-path", "path chain needs at least one torus"))
    elif shape.kind in INFINITE_KINDS and shape.n < MIN_PERIOD:
        out.append(Violation(path, "period-too-short", f"period < {MIN_PERIOD} (got {shape.n})"))
    if len(node.slots) != shape.n:
        if shape.is_finite:
            msg = f"{shape} needs {shape.n} slots, found {len(node.slots)}"
        else:
            msg = f"non-periodic slots: {shape} stores one period of {shape.n}, found {len(node.slots)}"
        out.append(Violation(path, "slot-count", msg))
    if shape.kind in INFINITE_KINDS and not node.pinch:
        out.append(Violation(path, "missing-pinch", "missing pinch point"))
    if shape.is_finite and node.pinch:
        out.append(Violation(path, "unexpected-pinch", f"finite chain {shape} cannot carry a pinch point"))
    if node.pinch and inside_infinite:
        out.append(Violation(path, "nested-pinch", "pinched chain repeated infinitely often inside an infinite chain"))
    for i, c in enumerate(node.slots):
        here = path + (i,)
        if isinstance(c, RigidLeaf):
            if c.rigid.id not in ids:
                out.append(Violation(here, "dangling-rigid", f"rigid class {c.rigid.id!r} not declared in universe"))
        elif isinstance(c, Truncation):
            if not approximate:
                out.append(Violation(here, "unflagged-truncation", "truncation in a sequence not flagged as approximate"))
        elif isinstance(c, ChainNode):
            out.extend(_node_violations(c, here, ids, approximate,
                                        inside_infinite or shape.kind in INFINITE_KINDS))
        else:
            out.append(Violation(here, "bad-content", f"unsupported slot content {type(c).__name__}"))
    return out


def validate(seq: DefiningSequence) -> ValidationReport:
    """Collect every structural violation of ``seq``; never raises."""
    ids = {r.id for r in seq.universe}
    violations = []
    for k, root in enumerate(seq.roots):
        prefix = () if k == 0 else (f"root{k}",)
        violations.extend(_node_violations(root, prefix, ids, seq.approximate, False))
    return ValidationReport(tuple(violations))


# ---------------------------------------------------------------------------
# canonical serialization


def node_to_dict(node: ChainNode) -> dict:
    size_key = "n" if node.shape.is_finite else "period"
    d = {
        "shape": node.shape.kind,
        size_key: node.shape.n,
        "slots": [_content_to_obj(c) for c in node.slots],
        "pinch": node.pinch,
    }
    if node.knotted:
        d["knotted"] = True
    return d


def _content_to_obj(c: SlotContent) -> Any:
    if isinstance(c, RigidLeaf):
        return {"rigid": c.rigid.id}
    if isinstance(c, Truncation):
        return {"truncated": True}
    return node_to_dict(c)


def to_dict(seq: DefiningSequence) -> dict:
    d = {
        "universe": [{"id": r.id, "name": r.name} for r in sorted(seq.universe)],
        "approximate": seq.approximate,
        "root": node_to_dict(seq.root),
    }
    if seq.extra_roots:
        d["extra_roots"] = [node_to_dict(r) for r in seq.extra_roots]
    return d


def canonical_serialize(seq: DefiningSequence) -> bytes:
    """Deterministic UTF-8 JSON encoding; equal sequences give equal bytes."""
    return json.dumps(to_dict(seq), sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


def _expect(cond: bool, msg: str):
    if not cond:
        raise SerializationError(msg)


def _int_field(obj: dict, name: str, where: str) -> int:
    v = obj.get(name)
    _expect(isinstance(v, int) and not isinstance(v, bool) and v >= 0, f"{where}: {name!r} must be a non-negative integer")
    return v


def node_from_obj(obj: Any, classes: dict, where: str = "root") -> ChainNode:
    _expect(isinstance(obj, dict), f"{where}: expected an object")
    kind = obj.get("shape")
    _expect(kind in FINITE_KINDS + INFINITE_KINDS, f"{where}: unknown shape {kind!r}")
    size = _int_field(obj, "n" if kind in FINITE_KINDS else "period", where)
    slots = obj.get("slots")
    _expect(isinstance(slots, list), f"{where}: 'slots' must be an array")
    pinch = obj.get("pinch", False)
    knotted = obj.get("knotted", False)
    _expect(isinstance(pinch, bool) and isinstance(knotted, bool), f"{where}: flags must be booleans")
    contents = []
    for i, s in enumerate(slots):
        here = f"{where}.{i}"
        _expect(isinstance(s, dict), f"{here}: expected an object")
        if "rigid" in s:
            rid = s["rigid"]
            _expect(isinstance(rid, str) and rid, f"{here}: rigid id must be a non-empty string")
            contents.append(RigidLeaf(classes.get(rid) or RigidClass(rid)))
        elif "truncated" in s:
            _expect(s["truncated"] is True, f"{here}: 'truncated' must be true")
            contents.append(Truncation())
        else:
            contents.append(node_from_obj(s, classes, here))
    return ChainNode(ChainShape(kind, size), tuple(contents), pinch, knotted)


def from_dict(obj: Any) -> DefiningSequence:
    _expect(isinstance(obj, dict), "top level must be an object")
    universe = obj.get("universe", [])
    _expect(isinstance(universe, list), "'universe' must be an array")
    classes = {}
    for entry in universe:
        _expect(isinstance(entry, dict) and isinstance(entry.get("id"), str) and entry["id"],
                "universe entries need a string 'id'")
        name = entry.get("name", "")
        _expect(isinstance(name, str), "universe names must be strings")
        classes[entry["id"]] = RigidClass(entry["id"], "" if name == entry["id"] else name)
    _expect("root" in obj, "missing 'root'")
    approximate = obj.get("approximate", False)
    _expect(isinstance(approximate, bool), "'approximate' must be a boolean")
    root = node_from_obj(obj["root"], classes)
    extra = obj.get("extra_roots", [])
    _expect(isinstance(extra, list), "'extra_roots' must be an array")
    extra_roots = tuple(node_from_obj(e, classes, f"root{k + 1}") for k, e in enumerate(extra))
    return DefiningSequence(root, frozenset(classes.values()), approximate, extra_roots)


def deserialize(data: bytes | str) -> DefiningSequence:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SerializationError(f"not UTF-8: {exc}") from exc
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SerializationError(f"invalid JSON: {exc}") from exc
    return from_dict(obj)
