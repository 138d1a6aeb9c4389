"""Generators and independent oracles shared by the test modules."""

from __future__ import annotations

import random
from itertools import product
from math import gcd

from antoine.model import (BIINFINITE, CYCLE, PATH, ChainNode, ChainShape, DefiningSequence, RigidClass, RigidLeaf,
                           Truncation)


def rigid_pool(k: int, prefix: str = "p") -> list[RigidClass]:
    return [RigidClass(f"{prefix}{i}", f"{prefix.upper()}{i}") for i in range(k)]


def random_node(rng: random.Random, depth: int, pool, max_width: int = 8, allow_infinite: bool = True) -> ChainNode:
    """Random chain tree with at most ``depth`` stages and chains of width <= ``max_width``."""
    kinds = [CYCLE, PATH] + ([BIINFINITE] if allow_infinite else [])
    kind = rng.choice(kinds)
    if kind == CYCLE:
        n = rng.randint(4, max(4, max_width))
    elif kind == PATH:
        n = rng.randint(1, max_width)
    else:
        n = rng.randint(3, max(3, max_width))
    slots = []
    # a few distinct sub-chains reused across slots so that symmetries survive
    subs = [random_node(rng, depth - 1, pool, max_width, allow_infinite and kind != BIINFINITE)
            for _ in range(2)] if depth > 1 else []
    for _ in range(n):
        if subs and rng.random() < 0.5:
            slots.append(rng.choice(subs))
        else:
            slots.append(RigidLeaf(rng.choice(pool)))
    return ChainNode(ChainShape(kind, n), slots, pinch=kind == BIINFINITE)


def random_sequence(rng: random.Random, depth: int = 3, max_width: int = 8, pool_size: int = 3) -> DefiningSequence:
    return DefiningSequence.from_root(random_node(rng, depth, rigid_pool(pool_size), max_width))


def _random_slot_map(rng: random.Random, shape: ChainShape):
    """A random adjacency-preserving map of positions, as a Python function."""
    n = shape.n
    if shape.kind == CYCLE:
        t = rng.randrange(n)
        if rng.random() < 0.5:
            return lambda i: (i + t) % n
        return lambda i: (t - i) % n
    if shape.kind == PATH:
        return (lambda i: n - 1 - i) if rng.random() < 0.5 else (lambda i: i)
    if shape.kind == BIINFINITE:
        t = rng.randrange(-2 * n, 2 * n)
        return (lambda i: i + t) if rng.random() < 0.5 else (lambda i: t - i)
    return lambda i: i


def symmetric_copy(node: ChainNode, rng: random.Random) -> ChainNode:
    """Re-embed ``node`` by a random chain symmetry at every stage: an equivalent tree."""
    f = _random_slot_map(rng, node.shape)
    p = node.shape.n
    new = [None] * p
    for i, c in enumerate(node.slots):
        if isinstance(c, ChainNode):
            c = symmetric_copy(c, rng)
        new[f(i) % p] = c
    return ChainNode(node.shape, new, node.pinch, node.knotted)


def relabel(node: ChainNode, mapping: dict) -> ChainNode:
    slots = []
    for c in node.slots:
        if isinstance(c, RigidLeaf):
            slots.append(RigidLeaf(mapping.get(c.rigid, c.rigid)))
        elif isinstance(c, ChainNode):
            slots.append(relabel(c, mapping))
        else:
            slots.append(c)
    return ChainNode(node.shape, slots, node.pinch, node.knotted)


def _periodic(node: ChainNode, i: int):
    return node.slots[i % len(node.slots)]


def certificate_is_valid(a: ChainNode, b: ChainNode, match) -> bool:
    """Check a node match by direct comparison, without the search code."""
    sym = match.symmetry
    if a.shape.kind != b.shape.kind:
        return False
    if a.shape.kind in (CYCLE, PATH):
        if a.shape.n != b.shape.n:
            return False
        n = a.shape.n
        image = [sym(i) for i in range(n)]
        if sorted(image) != list(range(n)):
            return False
        edges = {frozenset(e) for e in a.shape.edges()}
        if {frozenset((sym(x), sym(y))) for x, y in a.shape.edges()} != edges:
            return False
        positions = range(n)
    else:
        # compare a full common period, in both directions of the chain
        span = a.shape.n * b.shape.n // gcd(a.shape.n, b.shape.n)
        positions = range(-span if a.shape.kind == BIINFINITE else 0, span)
    for i in positions:
        ca = _periodic(a, i)
        cb = _periodic(b, sym(i))
        if isinstance(ca, ChainNode) != isinstance(cb, ChainNode):
            return False
        if isinstance(ca, ChainNode):
            # infinite chains are keyed by residue of the (possibly shortened) period
            sub = match.child(i % match.shape.n)
            if sub is None or not certificate_is_valid(ca, cb, sub):
                return False
        elif type(ca) is not type(cb):
            return False
        elif isinstance(ca, RigidLeaf) and ca.rigid != cb.rigid:
            return False
    return True


def element_orders(moduli) -> list[int]:
    """Sorted orders of all elements of Z/m_1 + ... + Z/m_k, by enumeration."""
    out = []
    for x in product(*(range(m) for m in moduli)):
        order = 1
        for xi, m in zip(x, moduli):
            o = m // gcd(xi, m)
            order = order * o // gcd(order, o)
        out.append(order)
    return sorted(out)


def dihedral_oracle(labels) -> set[tuple[int, ...]]:
    """Label-preserving automorphisms of a labeled n-cycle, by filtering all 2n dihedral maps."""
    n = len(labels)
    cycle_edges = {frozenset((i, (i + 1) % n)) for i in range(n)}
    perms = set()
    for t in range(n):
        perms.add(tuple((i + t) % n for i in range(n)))
        perms.add(tuple((t - i) % n for i in range(n)))
    good = set()
    for p in perms:
        if {frozenset((p[a], p[b])) for a, b in map(tuple, cycle_edges)} != cycle_edges:
            continue
        if all(labels[p[i]] == labels[i] for i in range(n)):
            good.add(p)
    return good


def closure_oracle(generators) -> set[tuple[int, ...]]:
    """Group generated by permutation tuples, by exhaustive multiplication."""
    n = len(generators[0])
    group = {tuple(range(n))}
    stack = list(group)
    while stack:
        g = stack.pop()
        for s in generators:
            h = tuple(g[s[i]] for i in range(n))
            if h not in group:
                group.add(h)
                stack.append(h)
    return group


def tower_generator_perms(generators, width: int, depth: int):
    """Permutations of the tori of a uniform tower induced by named tower generators."""
    tori = [()]
    level = [()]
    for _ in range(depth):
        level = [p + (i,) for p in level for i in range(width)]
        tori += level
    tori = tori[1:]
    pos = {p: k for k, p in enumerate(tori)}
    perms = []
    for g in generators:
        where = g.component
        k = len(where)

        def image(p):
            if len(p) > k and p[:k] == where:
                return p[:k] + (g.symmetry.apply(p[k]) % width,) + p[k + 1:]
            return p

        perms.append(tuple(pos[image(p)] for p in tori))
    return tori, perms
