import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from artifact import sampling as sm
from artifact.credence import (
    END_AMBIENT_LEFT,
    END_AMBIENT_RIGHT,
    END_NEG_INF,
    END_POS_INF,
    LEFT,
    RIGHT,
    AtomTable,
    EndMass,
    Lebesgue,
    Mixture,
    PointMass,
    check_additivity,
    credence_from_json,
    credence_to_json,
    extend_to_refinement,
    mixture,
)
from artifact.elementary_algebra import (
    REAL_LINE,
    boundary,
    closed_interval,
    empty,
    interval_set,
    join,
    meet,
    neg,
    open_interval,
    whole,
)
from artifact.errors import ArtifactError
from artifact.stone_rep import generate

from conftest import UNIT, UNIT_CLOSED, elementary_sets, iv

H = Fraction(1, 2)
SYM = open_interval(-1, 1)


def side_mixture(amb, phi_plus):
    """½ Lebesgue + ½ (φ₋ left germ + φ₊ right germ) at 0, dropping zero-weight parts."""
    parts = [(H, Lebesgue(amb))]
    if phi_plus < 1:
        parts.append((H * (1 - phi_plus), PointMass(amb, 0, LEFT)))
    if phi_plus > 0:
        parts.append((H * phi_plus, PointMass(amb, 0, RIGHT)))
    return Mixture(tuple(parts))


def test_lebesgue_is_normalized_length():
    mu = Lebesgue(UNIT)
    assert mu.eval(iv(UNIT, (Fraction(1, 5), Fraction(3, 5)))) == Fraction(2, 5)
    assert Lebesgue(SYM).eval(iv(SYM, (0, H))) == Fraction(1, 4)
    with pytest.raises(ArtifactError) as e:
        Lebesgue(REAL_LINE)
    assert e.value.code == "UNNORMALIZABLE"


@pytest.mark.parametrize("eps", [Fraction(1, 10 ** k) for k in range(1, 6)] + [Fraction(1), Fraction(3, 7)])
def test_right_germ_at_zero(eps):
    d0 = PointMass(SYM, 0, RIGHT)
    assert d0.eval(interval_set(SYM, 0, eps)) == 1
    assert d0.eval(interval_set(SYM, -eps, 0)) == 0


@pytest.mark.parametrize("phi_plus", [Fraction(0), Fraction(1, 3), H, Fraction(1)])
def test_side_mixture_value(phi_plus):
    # with λ(0,ε) = ε the value is (ε+φ₊)/2; that needs an ambient of length one
    amb = open_interval(-H, H)
    nu = side_mixture(amb, phi_plus)
    for eps in (Fraction(1, 10), Fraction(1, 1000), Fraction(2, 5)):
        assert nu.eval(interval_set(amb, 0, eps)) == (eps + phi_plus) / 2
        assert nu.eval(interval_set(amb, -eps, 0)) == (eps + 1 - phi_plus) / 2
    # on (-1,1) the normalized Lebesgue part halves ε
    nu = side_mixture(SYM, phi_plus)
    assert nu.eval(interval_set(SYM, 0, Fraction(1, 10))) == (Fraction(1, 20) + phi_plus) / 2


def test_point_mass_validation():
    with pytest.raises(ArtifactError) as e:
        PointMass(UNIT_CLOSED, 1, RIGHT)
    assert e.value.code == "BAD_CREDENCE"
    with pytest.raises(ArtifactError):
        PointMass(UNIT, 2, LEFT)
    with pytest.raises(ArtifactError):
        PointMass(UNIT, H, "up")


def test_end_masses():
    pos = EndMass(REAL_LINE, END_POS_INF)
    assert pos.eval(iv(REAL_LINE, (5, float("inf")))) == 1
    assert pos.eval(iv(REAL_LINE, (float("-inf"), 5))) == 0
    assert EndMass(REAL_LINE, END_NEG_INF).eval(iv(REAL_LINE, (float("-inf"), 5))) == 1
    assert EndMass(UNIT, END_AMBIENT_LEFT).eval(iv(UNIT, (0, Fraction(1, 10 ** 9)))) == 1
    with pytest.raises(ArtifactError):
        EndMass(UNIT, END_POS_INF)


def test_end_mass_at_closed_end_equals_inward_point_mass():
    rng = random.Random(7)
    for _ in range(300):
        E = sm.elementary_set(rng, UNIT_CLOSED, max_den=16)
        assert EndMass(UNIT_CLOSED, END_AMBIENT_LEFT).eval(E) == PointMass(UNIT_CLOSED, 0, RIGHT).eval(E)
        assert EndMass(UNIT_CLOSED, END_AMBIENT_RIGHT).eval(E) == PointMass(UNIT_CLOSED, 1, LEFT).eval(E)


def test_mixture_validation():
    with pytest.raises(ArtifactError):
        Mixture(((H, Lebesgue(UNIT)), (Fraction(1, 3), PointMass(UNIT, H, LEFT))))
    with pytest.raises(ArtifactError):
        Mixture(((Fraction(0), Lebesgue(UNIT)), (Fraction(1), PointMass(UNIT, H, LEFT))))
    with pytest.raises(ArtifactError) as e:
        Mixture(((H, Lebesgue(UNIT)), (H, PointMass(SYM, 0, LEFT))))
    assert e.value.code == "AMBIENT_MISMATCH"
    assert mixture((1, Lebesgue(UNIT))) == Lebesgue(UNIT)


def test_check_additivity_examples():
    amb = open_interval(-5, 5)
    cells = [interval_set(amb, 0, 1), interval_set(amb, 1, 2)]
    target = interval_set(amb, 0, 2)
    assert check_additivity(Lebesgue(amb), target, cells)
    pm = PointMass(amb, 1, RIGHT)
    assert check_additivity(pm, target, cells)
    assert [pm.eval(c) for c in cells] == [0, 1]
    assert check_additivity(pm, target, [target])
    with pytest.raises(ArtifactError) as e:
        check_additivity(pm, target, [interval_set(amb, 0, 1)])
    assert e.value.code == "NOT_A_PARTITION"


def test_atom_table_and_refinement():
    alg = generate([], UNIT)
    mu = AtomTable(alg, (Fraction(1),))
    finer = generate([interval_set(UNIT, 0, Fraction(1, 4))], UNIT)
    ext = extend_to_refinement(mu, finer)
    assert ext.weights == (Fraction(1, 4), Fraction(3, 4))
    assert extend_to_refinement(ext, finer) == ext
    coarse = generate([interval_set(UNIT, 0, H)], UNIT)
    zero_first = AtomTable(coarse, (Fraction(0), Fraction(1)))
    fine = generate([interval_set(UNIT, 0, H), interval_set(UNIT, 0, Fraction(1, 4))], UNIT)
    out = extend_to_refinement(zero_first, fine)
    assert out.weights == (0, 0, 1)
    for E in coarse.elements():
        assert out.eval(E) == zero_first.eval(E)
    with pytest.raises(ArtifactError) as e:
        extend_to_refinement(ext, coarse)
    assert e.value.code == "NOT_A_REFINEMENT"
    with pytest.raises(ArtifactError) as e:
        mu.eval(interval_set(UNIT, 0, H))
    assert e.value.code == "NOT_IN_ALGEBRA"


def test_unbounded_refinement_splits_uniformly():
    amb = REAL_LINE
    coarse = generate([], amb)
    fine = generate([iv(amb, (float("-inf"), 0))], amb)
    out = extend_to_refinement(AtomTable(coarse, (Fraction(1),)), fine)
    assert out.weights == (H, H)


def test_json_round_trip():
    mu = Mixture(((H, Lebesgue(UNIT)), (Fraction(1, 3), PointMass(UNIT, H, LEFT)),
                  (Fraction(1, 6), EndMass(UNIT, END_AMBIENT_RIGHT))))
    obj = credence_to_json(mu)
    assert obj["parts"][1]["of"] == {"rule": "point_mass", "x": "1/2", "side": "left"}
    assert credence_from_json(obj) == mu
    at = AtomTable(generate([interval_set(UNIT, 0, H)], UNIT), (Fraction(1, 3), Fraction(2, 3)))
    back = credence_from_json(credence_to_json(at))
    assert back.weights == at.weights and back.algebra.atoms == at.algebra.atoms
    with pytest.raises(ArtifactError) as e:
        credence_from_json({"rule": "gaussian"})
    assert e.value.code == "BAD_CREDENCE"


def test_ultrafilter_decides_one_of_four_cells():
    # truncation of E+, O+, E-, O- at depth n, with the remainder near 0 split by sign
    amb = closed_interval(-1, 1)
    for n in range(1, 8):
        Ep = [(Fraction(1, 2 * k + 1), Fraction(1, 2 * k)) for k in range(1, n + 1)]
        Op = [(Fraction(1, 2 * k), Fraction(1, 2 * k - 1)) for k in range(1, n + 1)]
        Em = [(-b, -a) for a, b in Ep]
        Om = [(-b, -a) for a, b in Op]
        r = Fraction(1, 2 * n + 1)
        cells = [iv(amb, *sorted(c)) for c in (Ep, Op, Em, Om)] + [
            iv(amb, (0, r)), iv(amb, (-r, 0))]
        for side in (LEFT, RIGHT):
            d0 = PointMass(amb, 0, side)
            masses = [d0.eval(c) for c in cells]
            assert sorted(masses) == [0, 0, 0, 0, 0, 1]
            assert check_additivity(d0, whole(amb), cells)


# --- properties ---------------------------------------------------------------

rules = st.sampled_from(["mixture", "point", "end", "lebesgue"])


def _random_credence(seed, amb):
    return sm.mixture_credence(random.Random(seed), amb, max_den=64)


@given(st.integers(0, 10 ** 6), st.data())
def test_complement_sums_to_one_and_monotone(seed, data):
    amb = data.draw(st.sampled_from([UNIT, UNIT_CLOSED, REAL_LINE]))
    mu = _random_credence(seed, amb)
    E = data.draw(elementary_sets(amb))
    F = data.draw(elementary_sets(amb))
    assert mu.eval(E) + mu.eval(neg(E)) == 1
    assert mu.eval(empty(amb)) == 0 and mu.eval(whole(amb)) == 1
    small, big = meet(E, F), join(E, F)
    assert mu.eval(small) <= mu.eval(E) <= mu.eval(big)
    assert 0 <= mu.eval(E) <= 1


@given(st.integers(0, 10 ** 6), st.data())
def test_finite_additivity_on_random_partitions(seed, data):
    amb = data.draw(st.sampled_from([UNIT, UNIT_CLOSED, REAL_LINE]))
    rng = random.Random(seed)
    mu = sm.mixture_credence(rng, amb, max_den=64)
    T = data.draw(elementary_sets(amb))
    cells = sm.partition(rng, T, max_den=64)
    assert check_additivity(mu, T, cells)


@given(st.data())
def test_sides_agree_off_the_boundary(data):
    amb = UNIT
    E = data.draw(elementary_sets(amb))
    x = data.draw(st.fractions(min_value=Fraction(1, 64), max_value=Fraction(63, 64), max_denominator=64))
    left, right = PointMass(amb, x, LEFT), PointMass(amb, x, RIGHT)
    if x not in boundary(E):
        assert left.eval(E) == right.eval(E)
    else:
        assert left.eval(E) + right.eval(E) == 1


def test_lebesgue_full_support_point_mass_not():
    E = interval_set(UNIT, Fraction(1, 10 ** 6), Fraction(2, 10 ** 6))
    assert Lebesgue(UNIT).eval(E) > 0
    assert PointMass(UNIT, H, RIGHT).eval(E) == 0
