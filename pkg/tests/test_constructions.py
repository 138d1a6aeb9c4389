from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from antoine.autgroup import canonical_invariants, group_isomorphic, homogeneity_group
from antoine.constructions import (RigidAllocator, GroupSpec, build_group, build_z, build_zm, parse_group_spec,
                                   uniform_tower)
from antoine.errors import DomainError, ParseError
from antoine.model import ChainNode, RigidLeaf, Truncation, iter_leaves, navigate, validate


def test_zm_layout():
    seq = build_zm(6, RigidAllocator(seed=1))
    assert str(seq.root.shape) == "Cycle(24)"
    counts = Counter(c.rigid.id for c in seq.root.slots)
    assert len(counts) == 4 and set(counts.values()) == {6}
    assert validate(seq).ok


def test_zm_two_labels():
    alloc = RigidAllocator(seed=1)
    seq = build_zm(2, alloc)
    a, b, c, d = alloc.log
    assert [x.rigid for x in seq.root.slots] == [a, b, c, d, a, b, c, d]


def test_zm_one_and_domain():
    assert str(build_zm(1, RigidAllocator(seed=1)).root.shape) == "Cycle(4)"
    with pytest.raises(DomainError):
        build_zm(0, RigidAllocator(seed=1))


def test_z_layout():
    alloc = RigidAllocator(seed=1)
    seq = build_z(alloc)
    assert seq.root.pinch and str(seq.root.shape) == "BiInfinite(3)"
    assert [x.rigid for x in seq.root.slots] == alloc.log
    assert navigate(seq, [4]) == navigate(seq, [1])
    assert validate(seq).ok


def test_group_layouts():
    seq = build_group(GroupSpec(2, (2,)), RigidAllocator(seed=1))
    assert str(seq.root.shape) == "Path(3)"
    assert [c.shape.kind for c in seq.root.slots] == ["biinfinite", "biinfinite", "cycle"]
    assert seq.root.slots[2].shape.n == 8
    seq = build_group(GroupSpec(0, (6,)), RigidAllocator(seed=1))
    assert str(seq.root.shape) == "Path(1)" and seq.root.slots[0].shape.n == 24
    seq = build_group(GroupSpec(2, (2, 3, 4, 5)), RigidAllocator(seed=1))
    assert str(seq.root.shape) == "Path(6)"


def test_empty_spec_rejected():
    with pytest.raises(DomainError):
        GroupSpec(0, ())
    with pytest.raises(DomainError):
        GroupSpec(1, (1,))


def test_duplicate_torsion_gets_disjoint_classes():
    seq = build_group(GroupSpec(0, (2, 2)), RigidAllocator(seed=1))
    left, right = ({c.rigid.id for c in comp.slots} for comp in seq.root.slots)
    assert not left & right
    assert str(homogeneity_group(seq).abelian) == "Z/2 x Z/2"


@given(st.integers(0, 3), st.lists(st.integers(2, 6), max_size=3))
def test_build_freshness_and_group(n, torsion):
    if n + len(torsion) == 0:
        return
    seq = build_group(GroupSpec(n, tuple(torsion)), RigidAllocator(seed=11))
    assert validate(seq).ok
    per_component = [frozenset(c.rigid.id for c in comp.slots) for comp in seq.root.slots]
    assert sum(map(len, per_component)) == len(frozenset().union(*per_component))
    got = homogeneity_group(seq).abelian
    assert group_isomorphic(got, canonical_invariants(n, torsion))


def test_allocators_do_not_collide():
    a, b = RigidAllocator(seed=1), RigidAllocator(seed=2)
    ids = {c.id for c in a.fresh_many(50)} | {c.id for c in b.fresh_many(50)}
    assert len(ids) == 100
    assert RigidAllocator().seed != RigidAllocator().seed


def test_uniform_tower():
    tower = uniform_tower(4, 3)
    assert tower.slots[0].slots[0].slots[0] == Truncation()
    solid = uniform_tower(4, 3, RigidLeaf(RigidAllocator(seed=1).fresh()))
    assert sum(1 for _ in iter_leaves(solid)) == 4 ** 3
    with pytest.raises(DomainError):
        uniform_tower(4, 0)


@pytest.mark.parametrize("text, rank, torsion", [
    ("Z^2 x Z/2 x Z/4", 2, (2, 4)),
    ("Z", 1, ()),
    ("Z^1", 1, ()),
    ("Z/6", 0, (6,)),
    ("  Z^3x Z/2xZ/2 ", 3, (2, 2)),
    ("Z + Z/3 ⊕ Z", 2, (3,)),
    ("Z^0 x Z/5", 0, (5,)),
])
def test_parse_examples(text, rank, torsion):
    assert parse_group_spec(text) == GroupSpec(rank, torsion)


@pytest.mark.parametrize("text, position", [
    ("Z^2 x Q", 6),
    ("Z^", 2),
    ("Z/2 x", 5),
    ("Z/x", 2),
    ("", 0),
    ("Z Z", 2),
])
def test_parse_errors_report_position(text, position):
    with pytest.raises(ParseError) as info:
        parse_group_spec(text)
    assert info.value.position == position


@pytest.mark.parametrize("text", ["Z^0", "Z/1", "Z/0 x Z"])
def test_parse_domain_errors(text):
    with pytest.raises(DomainError):
        parse_group_spec(text)


@given(st.integers(0, 4), st.lists(st.integers(2, 30), max_size=4))
def test_parse_round_trip(n, torsion):
    if n + len(torsion) == 0:
        return
    spec = GroupSpec(n, tuple(torsion))
    assert parse_group_spec(str(spec)) == spec
