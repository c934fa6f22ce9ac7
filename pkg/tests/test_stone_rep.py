import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from artifact import sampling as sm
from artifact.credence import LEFT, RIGHT, AtomTable, Lebesgue, PointMass
from artifact.elementary_algebra import empty, interval_set, join_all, meet, whole
from artifact.errors import ArtifactError
from artifact.integrator import BPartition, PiecewiseAffine, SimpleFunction, constant, constant_function, simple_integral
from artifact.stone_rep import (
    algebra_minorant,
    dyadic_algebra,
    generate,
    refining_limit,
    refining_sequence,
    star_integral,
    star_measure,
    stone_space,
)

from conftest import UNIT, UNIT_CLOSED, iv

H = Fraction(1, 2)
Q = Fraction(1, 4)
LEB = Lebesgue(UNIT)
HALVES = generate([interval_set(UNIT, 0, H)], UNIT)


def test_generate_examples():
    assert HALVES.atoms == (iv(UNIT, (0, H)), iv(UNIT, (H, 1)))
    assert set(HALVES.elements()) == {empty(UNIT), iv(UNIT, (0, H)), iv(UNIT, (H, 1)), whole(UNIT)}
    two = generate([interval_set(UNIT, 0, H), interval_set(UNIT, Q, 3 * Q)], UNIT)
    assert two.atoms == (iv(UNIT, (0, Q)), iv(UNIT, (Q, H)), iv(UNIT, (H, 3 * Q)), iv(UNIT, (3 * Q, 1)))
    trivial = generate([], UNIT)
    assert set(trivial.elements()) == {empty(UNIT), whole(UNIT)}
    assert HALVES.verify_closure() and two.verify_closure()


def test_generate_cap():
    gens = [interval_set(UNIT, Fraction(k, 20), Fraction(k + 1, 20)) for k in range(20)]
    with pytest.raises(ArtifactError) as e:
        generate(gens, UNIT)
    assert e.value.code == "CLOSURE_TOO_LARGE"
    assert len(generate(gens[:4], UNIT, cap=2 ** 5).atoms) == 5


def test_mask_of_rejects_foreign_sets():
    with pytest.raises(ArtifactError) as e:
        HALVES.mask_of(interval_set(UNIT, 0, Q))
    assert e.value.code == "NOT_IN_ALGEBRA"


def test_star_measure_examples():
    assert star_measure(LEB, HALVES) == (H, H)
    assert star_measure(PointMass(UNIT, H, RIGHT), HALVES) == (0, 1)
    assert star_measure(PointMass(UNIT, H, LEFT), HALVES) == (1, 0)
    table = AtomTable(HALVES, (Fraction(1, 3), Fraction(2, 3)))
    assert star_measure(table, HALVES) == table.weights


def test_star_integral_examples():
    S = whole(UNIT)
    assert star_integral(constant_function(UNIT, 1), LEB, S, HALVES) == 1
    f = SimpleFunction(BPartition(S, HALVES.atoms), (1, 3))
    assert star_integral(f, LEB, S, HALVES) == 2 == simple_integral(f, LEB, S)
    assert star_integral(f, LEB, iv(UNIT, (0, H)), HALVES) == H


def test_star_integral_not_subordinate():
    f = SimpleFunction(BPartition(whole(UNIT), (iv(UNIT, (0, Q)), iv(UNIT, (Q, 1)))), (1, 2))
    with pytest.raises(ArtifactError) as e:
        star_integral(f, LEB, whole(UNIT), HALVES)
    assert e.value.code == "NOT_SUBORDINATE"


def test_stone_space_points_and_ultrafilters():
    alg = dyadic_algebra(UNIT, 2)
    space = stone_space(alg)
    assert space.points == (0, 1, 2, 3)
    assert space.verify_isomorphism()
    uf = space.ultrafilter(1)
    assert len(uf) == 8 and all(alg.atoms[1].issubset(E) for E in uf)


def test_refining_dyadic_identity():
    g = PiecewiseAffine(UNIT, (0, 1), (0, 1))
    algs = [dyadic_algebra(UNIT, k) for k in range(1, 8)]
    res = refining_sequence(g, LEB, algs, Fraction(1, 10 ** 9))
    assert res.history == tuple(H - Fraction(1, 2 ** (k + 1)) for k in range(1, 8))
    assert not res.converged
    with pytest.raises(ArtifactError) as e:
        refining_limit(g, LEB, algs, Fraction(1, 10 ** 9))
    assert e.value.code == "NO_CONVERGENCE"
    # first depth with 2^-(k+1) <= 1/100 is k = 6
    assert refining_limit(g, LEB, algs, Fraction(1, 100)) == H - Fraction(1, 2 ** 7)


def test_refining_constant_and_point_mass():
    algs = [dyadic_algebra(UNIT, k) for k in range(1, 6)]
    res = refining_sequence(constant(UNIT, Fraction(3, 7)), LEB, algs, Fraction(1, 1000))
    assert res.converged and res.history == (Fraction(3, 7),)
    x = Fraction(1, 3)
    g = PiecewiseAffine(UNIT, (0, 1), (0, 1))
    algs = [dyadic_algebra(UNIT, k) for k in range(1, 12)]
    v = refining_limit(g, PointMass(UNIT, x, RIGHT), algs, Fraction(1, 100))
    assert x - Fraction(1, 100) <= v <= x


def test_refining_rejects_non_refinement():
    algs = [dyadic_algebra(UNIT, 2), generate([interval_set(UNIT, 0, Fraction(1, 3))], UNIT)]
    g = PiecewiseAffine(UNIT, (0, 1), (0, 1))
    with pytest.raises(ArtifactError) as e:
        refining_sequence(g, LEB, algs, Fraction(1, 10 ** 6))
    assert e.value.code == "NOT_A_REFINEMENT"


def test_dyadic_algebra_past_the_cap():
    alg = dyadic_algebra(UNIT_CLOSED, 5)
    assert len(alg.atoms) == 32


# --- properties ---------------------------------------------------------------


@settings(max_examples=40)
@given(st.integers(0, 10 ** 6), st.integers(0, 3))
def test_clopen_map_is_an_isomorphism(seed, k):
    rng = random.Random(seed)
    gens = [sm.elementary_set(rng, UNIT, max_intervals=2, max_den=16) for _ in range(k)]
    alg = generate(gens, UNIT)
    if len(alg.atoms) > 6:
        return
    assert alg.verify_closure()
    assert stone_space(alg).verify_isomorphism()


@settings(max_examples=40)
@given(st.integers(0, 10 ** 6))
def test_star_integral_equals_simple_integral(seed):
    rng = random.Random(seed)
    gens = [sm.elementary_set(rng, UNIT, max_intervals=2, max_den=16) for _ in range(rng.randint(0, 3))]
    alg = generate(gens, UNIT)
    if len(alg.atoms) > 6:
        return
    mu = sm.mixture_credence(rng, UNIT, max_den=16)
    n = len(alg.atoms)
    # group atoms into cells; every grouping gives a subordinate simple function
    labels = [rng.randrange(n) for _ in range(n)]
    cells = {}
    for A, lab in zip(alg.atoms, labels):
        cells.setdefault(lab, []).append(A)
    parts = tuple(join_all(v, UNIT) for v in cells.values())
    f = SimpleFunction(BPartition(whole(UNIT), parts), tuple(sm.small_rational(rng, -3, 3) for _ in parts))
    for mask in range(1 << n):
        D = alg.element(mask)
        assert star_integral(f, mu, D, alg) == simple_integral(f, mu, D)


@settings(max_examples=60)
@given(st.integers(0, 10 ** 6))
def test_refining_values_are_monotone(seed):
    rng = random.Random(seed)
    mu = sm.mixture_credence(rng, UNIT, max_den=64)
    g = sm.piecewise_affine(rng, UNIT, max_den=64)
    algs = [dyadic_algebra(UNIT, k) for k in range(0, 7)]
    res = refining_sequence(g, mu, algs, Fraction(0))
    assert list(res.history) == sorted(res.history)
    assert res.history[-1] <= res.target
    f = algebra_minorant(g, algs[3])
    for A, v in f.cells():
        assert v <= g.sup_on(A)


def test_atom_weights_exhaustive():
    # every weight vector on up to five atoms with entries in {0..5} (normalized) is recovered
    for n in range(1, 6):
        cuts = [Fraction(k, n) for k in range(1, n)]
        alg = generate([interval_set(UNIT, 0, c) for c in cuts], UNIT)
        assert len(alg.atoms) == n
        for raw in product(range(6), repeat=n):
            total = sum(raw)
            if not total:
                continue
            w = tuple(Fraction(r, total) for r in raw)
            mu = AtomTable(alg, w)
            assert star_measure(mu, alg) == w
            if n <= 3:
                for mask in range(1 << n):
                    D = alg.element(mask)
                    assert mu.eval(D) == sum((w[i] for i in range(n) if mask >> i & 1), Fraction(0))
        assert meet(alg.atoms[0], alg.atoms[-1]).is_empty or n == 1
