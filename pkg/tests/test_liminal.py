import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from artifact import sampling as sm
from artifact.credence import END_AMBIENT_LEFT, END_AMBIENT_RIGHT, LEFT, RIGHT, AtomTable, EndMass, Lebesgue, Mixture, PointMass
from artifact.elementary_algebra import closed_interval, extend, interval_set, open_interval, whole
from artifact.errors import ArtifactError
from artifact.integrator import PiecewiseAffine, constant
from artifact.liminal import (
    BorelPart,
    LiminalRule,
    compactify,
    consistency,
    decompose,
    integral_identity_sides,
    mass_identity_sides,
    open_interval_mass,
    share_into,
    verify_integral_identity,
    verify_mass_identity,
)
from artifact.stone_rep import generate

from conftest import UNIT, UNIT_CLOSED, elementary_sets, iv

H = Fraction(1, 2)
SYM = closed_interval(-1, 1)


def side_mixture(phi_plus):
    parts = [(H, Lebesgue(SYM))]
    if phi_plus < 1:
        parts.append((H * (1 - phi_plus), PointMass(SYM, 0, LEFT)))
    if phi_plus > 0:
        parts.append((H * phi_plus, PointMass(SYM, 0, RIGHT)))
    return Mixture(tuple(parts))


def test_decompose_examples():
    d = decompose(Lebesgue(UNIT_CLOSED))
    assert d.borel.lebesgue_weight == 1 and d.borel.atoms == () and d.rule.shares == {}
    for phi in (Fraction(0), Fraction(1, 3), Fraction(1)):
        d = decompose(side_mixture(phi))
        assert d.borel.lebesgue_weight == H
        assert d.borel.atoms == ((0, H),)
        assert d.rule.shares[0] == (1 - phi, phi)
    x = Fraction(2, 5)
    d = decompose(PointMass(UNIT_CLOSED, x, RIGHT))
    assert d.borel.atoms == ((x, 1),) and d.rule.shares[x] == (0, 1)


def test_decompose_needs_compact_ambient():
    with pytest.raises(ArtifactError) as e:
        decompose(Lebesgue(UNIT))
    assert e.value.code == "UNSUPPORTED_RULE"
    alg = generate([], UNIT_CLOSED)
    with pytest.raises(ArtifactError) as e:
        decompose(AtomTable(alg, (Fraction(1),)))
    assert e.value.code == "UNSUPPORTED_RULE"


def test_end_germs_become_end_atoms():
    mu = Mixture(((H, EndMass(UNIT_CLOSED, END_AMBIENT_LEFT)), (H, EndMass(UNIT_CLOSED, END_AMBIENT_RIGHT))))
    d = decompose(mu)
    assert d.borel.atoms == ((0, H), (1, H))
    assert d.rule.shares == {Fraction(0): (0, 1), Fraction(1): (1, 0)}


def test_mass_identity_examples():
    for phi in (Fraction(0), Fraction(1, 3), Fraction(1)):
        mu = side_mixture(phi)
        d = decompose(mu)
        assert verify_mass_identity(mu, d, whole(SYM))
        for eps in (Fraction(1, 10), Fraction(1, 1000)):
            # λ is the length measure of [-1,1] here, normalized by 2
            left, right = mass_identity_sides(mu, d, interval_set(SYM, 0, eps))
            assert left == right == (eps / 2 + phi) / 2


def test_integral_identity_examples():
    mu = side_mixture(Fraction(1, 3))
    d = decompose(mu)
    R = interval_set(SYM, Fraction(-1, 2), Fraction(1, 2))
    assert verify_integral_identity(mu, d, constant(SYM, 1), R)
    pm = PointMass(UNIT_CLOSED, 0, RIGHT)
    g = PiecewiseAffine(UNIT_CLOSED, (0, 1), (1, 0))
    assert verify_integral_identity(pm, decompose(pm), g, interval_set(UNIT_CLOSED, 0, 1))
    pm_inner = PointMass(UNIT_CLOSED, H, RIGHT)
    R = interval_set(UNIT_CLOSED, H, 1)
    assert verify_integral_identity(pm_inner, decompose(pm_inner), g, R)
    leb = Lebesgue(UNIT_CLOSED)
    ident = PiecewiseAffine(UNIT_CLOSED, (0, 1), (0, 1))
    assert integral_identity_sides(leb, decompose(leb), ident, interval_set(UNIT_CLOSED, 0, H)) == (Fraction(1, 8), Fraction(1, 8))


def test_share_into():
    R = interval_set(SYM, -1, 0)
    assert share_into(R, Fraction(0), (Fraction(1, 3), Fraction(2, 3))) == Fraction(1, 3)
    assert share_into(whole(SYM), Fraction(0), (Fraction(1, 3), Fraction(2, 3))) == 1
    assert share_into(interval_set(SYM, H, 1), Fraction(0), (H, H)) == 0


def test_bad_parts():
    with pytest.raises(ArtifactError):
        BorelPart(H, ((0, Fraction(1, 3)),))
    with pytest.raises(ArtifactError):
        LiminalRule({Fraction(0): (H, Fraction(1, 3))})


def test_compactify_examples():
    germ = EndMass(UNIT, END_AMBIENT_LEFT)
    bar = compactify(germ)
    assert bar == PointMass(UNIT_CLOSED, 0, RIGHT)
    # the germ at an open end has no Borel part living on (0,1)
    assert open_interval_mass(decompose(bar), 0, 1) == 0
    assert compactify(Lebesgue(UNIT)) == Lebesgue(UNIT_CLOSED)
    assert compactify(bar) == bar
    assert compactify(EndMass(UNIT, END_AMBIENT_RIGHT)) == PointMass(UNIT_CLOSED, 1, LEFT)
    with pytest.raises(ArtifactError) as e:
        compactify(PointMass(open_interval(0, float("inf")), 1, LEFT))
    assert e.value.code == "UNBOUNDED_AMBIENT"


def test_compactify_atom_table():
    alg = generate([interval_set(UNIT, 0, H)], UNIT)
    mu = AtomTable(alg, (Fraction(1, 3), Fraction(2, 3)))
    bar = compactify(mu)
    for E in alg.elements():
        assert bar.eval(extend(E)) == mu.eval(E)


# --- properties ---------------------------------------------------------------


@given(st.integers(0, 10 ** 6), st.data())
def test_mass_and_integral_identities(seed, data):
    rng = random.Random(seed)
    mu = sm.liminal_mixture(rng, UNIT_CLOSED)
    d = decompose(mu)
    R = data.draw(elementary_sets(UNIT_CLOSED))
    assert verify_mass_identity(mu, d, R)
    g = sm.piecewise_affine(rng, UNIT_CLOSED, max_den=64)
    assert verify_integral_identity(mu, d, g, R)


@given(st.integers(0, 10 ** 6))
def test_shares_are_consistent_on_partitions(seed):
    rng = random.Random(seed)
    mu = sm.liminal_mixture(rng, UNIT_CLOSED)
    d = decompose(mu)
    cells = sm.partition(rng, whole(UNIT_CLOSED), max_den=32)
    # push cut points onto atoms sometimes so the shares are actually split
    atoms = [x for x, _ in d.borel.atoms if 0 < x < 1]
    if atoms and rng.random() < 0.5:
        x = rng.choice(atoms)
        cells = [iv(UNIT_CLOSED, (0, x)), iv(UNIT_CLOSED, (x, 1))]
    assert consistency(d, cells)


@given(st.integers(0, 10 ** 6), st.data())
def test_compactify_agrees_on_corresponding_sets(seed, data):
    rng = random.Random(seed)
    mu = sm.mixture_credence(rng, UNIT, max_den=64)
    bar = compactify(mu)
    E = data.draw(elementary_sets(UNIT))
    assert bar.eval(extend(E)) == mu.eval(E)
    d = decompose(bar)
    assert verify_mass_identity(bar, d, extend(E))
