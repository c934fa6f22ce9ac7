from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from artifact.errors import ArtifactError
from artifact.finite_oracle import (
    FiniteSpace,
    baire_bijection_check,
    baire_integral_check,
    baire_sets,
    closure,
    cross_checked_topologies,
    discrete,
    enumerate_topologies,
    interior,
    is_regular,
    meager_sets,
    regular_algebra,
    regular_opens,
    regular_partitions,
    run_oracle,
    stone_check,
)

SIERPINSKI = FiniteSpace(2, frozenset({0b00, 0b01, 0b11}))
# points 1, 2, 3 are bits 0, 1, 2; opens ∅, {1}, {3}, {1,3}, S
THREE = FiniteSpace(3, frozenset({0b000, 0b001, 0b100, 0b101, 0b111}))


def test_sierpinski():
    assert closure(SIERPINSKI, 0b01) == 0b11
    assert not is_regular(SIERPINSKI, 0b01)
    assert regular_opens(SIERPINSKI) == [0, 0b11]
    assert meager_sets(SIERPINSKI) == [0, 0b10]
    rep = baire_bijection_check(SIERPINSKI)
    assert rep.ok and rep.n_classes == 2


def test_three_point_space():
    alg = regular_algebra(THREE)
    assert alg.elements == [0b000, 0b001, 0b100, 0b111]
    assert alg.join(0b001, 0b100) == 0b111
    assert alg.meet(0b001, 0b100) == 0
    assert alg.neg(0b001) == 0b100
    assert alg.atoms == [0b001, 0b100]
    assert alg.verify_axioms()
    assert interior(THREE, 0b011) == 0b001


@pytest.mark.parametrize("n", [1, 2, 3])
def test_discrete_spaces(n):
    sp = discrete(n)
    assert regular_opens(sp) == list(range(1 << n))
    assert meager_sets(sp) == [0]
    assert baire_sets(sp) == list(range(1 << n))
    assert baire_bijection_check(sp).ok
    assert stone_check(sp)


def test_bad_topology():
    with pytest.raises(ArtifactError):
        FiniteSpace(2, frozenset({0, 0b01, 0b10}))
    with pytest.raises(ArtifactError):
        FiniteSpace(2, frozenset({0b01, 0b11}))


@pytest.mark.parametrize("n,count", [(1, 1), (2, 4), (3, 29), (4, 355)])
def test_topology_counts_agree_across_methods(n, count):
    fam = {sp.opens for sp in enumerate_topologies(n, method="families")}
    pre = {sp.opens for sp in enumerate_topologies(n, method="preorders")}
    assert fam == pre
    assert len(fam) == count
    assert len(cross_checked_topologies(n)) == count


def test_enumeration_cap():
    with pytest.raises(ArtifactError) as e:
        list(enumerate_topologies(5))
    assert e.value.code == "CAP_EXCEEDED"


def test_integral_examples():
    ralg = regular_algebra(THREE)
    w = {0b001: Fraction(1, 3), 0b100: Fraction(2, 3)}
    S = THREE.full
    # constant f gives mu[B] on both sides
    assert baire_integral_check(THREE, w, [S], [Fraction(5)], 0b001)
    for cells in regular_partitions(THREE):
        for B in ralg.elements:
            vals = [Fraction(2 * i - 1, 3) for i in range(len(cells))]
            assert baire_integral_check(THREE, w, cells, vals, B)
    # a credence sitting on the dense point's atom
    assert baire_integral_check(SIERPINSKI, {0b11: Fraction(1)}, [0b11], [Fraction(-2)], 0b11)


def test_run_oracle_small():
    rows = run_oracle(max_points=3)
    assert [r.spaces for r in rows] == [1, 4, 29]
    for r in rows:
        assert r.failures == []
        assert all(v == r.spaces for v in r.passed.values())
    with pytest.raises(ArtifactError):
        run_oracle(max_points=2, checks=("nonsense",))


@settings(max_examples=50)
@given(st.data())
def test_every_baire_set_has_one_regular_representative(data):
    spaces = cross_checked_topologies(3)
    sp = data.draw(st.sampled_from(spaces))
    meager = set(meager_sets(sp))
    regular = regular_opens(sp)
    for A in baire_sets(sp):
        assert sum(1 for R in regular if (A ^ R) in meager) == 1
    assert regular_algebra(sp).verify_axioms()
