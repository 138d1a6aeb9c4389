import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from antoine.autgroup import act_on_address, homogeneity_group
from antoine.constructions import RigidAllocator, GroupSpec, build_group, build_z, build_zm, uniform_tower
from antoine.errors import AddressError, TruncationError
from antoine.genus import frontier_point, genus_spectrum, half_chain, local_genus, restrict, rigid_point
from antoine.model import ChainNode, ChainShape, DefiningSequence, PinchPoint, PointAddress, RigidLeaf

from helpers import rigid_pool


def test_torus_points_have_genus_one():
    alloc = RigidAllocator(seed=1)
    seq = build_zm(3, alloc)
    for i in range(12):
        assert local_genus(seq, rigid_point((i,), seq.root.slot(i).rigid)) == 1


def test_pinch_point_has_genus_two():
    seq = build_z(RigidAllocator(seed=1))
    assert local_genus(seq, PointAddress((), PinchPoint())) == 2
    assert local_genus(seq, rigid_point((-17,), seq.root.slot(-17).rigid)) == 1


def test_one_sided_pinch_has_genus_one():
    seq = build_z(RigidAllocator(seed=1))
    for side in (1, -1):
        ray = DefiningSequence.from_root(half_chain(seq.root, side))
        assert local_genus(ray, PointAddress((), PinchPoint())) == 1
        assert genus_spectrum(ray).exceptional == {}


def test_genus_monotone_under_restriction():
    # passing to the half-chain (a sub-Cantor set through w) cannot raise the genus at w
    seq = build_group(GroupSpec(2, (3,)), RigidAllocator(seed=2))
    for k in range(2):
        sub = restrict(seq, (k,))
        full = local_genus(sub, PointAddress((), PinchPoint()))
        half = local_genus(DefiningSequence.from_root(half_chain(sub.root)), PointAddress((), PinchPoint()))
        assert half <= full


def test_bad_addresses():
    seq = build_z(RigidAllocator(seed=1))
    with pytest.raises(AddressError):
        local_genus(seq, PointAddress((0, 0), PinchPoint()))
    with pytest.raises(AddressError):
        local_genus(seq, PointAddress((), PinchPoint(), root=1))
    with pytest.raises(AddressError):
        local_genus(seq, PointAddress((0,), PinchPoint()))


def test_truncation_frontier_is_an_error():
    tower = DefiningSequence.from_root(uniform_tower(4, 2))
    with pytest.raises(TruncationError):
        local_genus(tower, frontier_point((0, 1)))
    with pytest.raises(TruncationError):
        genus_spectrum(tower)


@pytest.mark.parametrize("n, torsion", [(0, (2,)), (1, ()), (2, (3, 4)), (3, (2, 2, 6))])
def test_spectrum_counts_pinch_points(n, torsion):
    report = genus_spectrum(build_group(GroupSpec(n, torsion), RigidAllocator(seed=3)))
    assert report.count(2) == n
    assert set(report.counts) <= {2}
    assert report.generic == 1
    assert report.spectrum[1] == "all remaining points"


def test_spectrum_json():
    data = genus_spectrum(build_z(RigidAllocator(seed=4))).to_json()
    assert data == {"exceptional": {"2": ["root:w"]}, "counts": {"2": 1}, "generic": 1}


@given(st.integers(-40, 40), st.integers(-3, 3))
def test_genus_invariant_under_homogeneity_generators(i, power):
    alloc = RigidAllocator(seed=5)
    seq = build_group(GroupSpec(1, (2,)), alloc)
    gens = homogeneity_group(seq).generators
    for path in [(0, i), (1, i % 8)]:
        p = rigid_point(path, seq.root.slot(path[0]).slot(path[1]).rigid)
        for g in gens:
            q = act_on_address(g, p, power)
            content = seq.root.slot(q.path[0]).slot(q.path[1])
            q = rigid_point(q.path, content.rigid)
            assert local_genus(seq, q) == local_genus(seq, p)
    w = PointAddress((0,), PinchPoint())
    for g in gens:
        assert local_genus(seq, act_on_address(g, w, power)) == 2
