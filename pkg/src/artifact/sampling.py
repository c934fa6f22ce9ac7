"""Seeded random generators for rationals, sets, partitions, functions and credences."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import List

from .credence import LEFT, RIGHT, EndMass, Lebesgue, Mixture, PointMass, END_AMBIENT_LEFT, END_AMBIENT_RIGHT
from .elementary_algebra import (
    Ambient,
    ElementarySet,
    closed_interval,
    is_finite,
    join_all,
    meet,
    regularize,
    whole,
)
from .integrator import BPartition, PiecewiseAffine

MAX_DEN = 10 ** 6


def rational(rng: random.Random, lo=0, hi=1, max_den: int = MAX_DEN) -> Fraction:
    """Uniform-ish rational in [lo, hi] with denominator at most max_den."""
    lo, hi = Fraction(lo), Fraction(hi)
    den = rng.randint(1, max_den)
    k_lo = -((-lo * den).__floor__())  # ceil
    k_hi = (hi * den).__floor__()
    if k_lo > k_hi:
        return lo
    return Fraction(rng.randint(k_lo, k_hi), den)


def small_rational(rng: random.Random, lo=0, hi=1, max_den: int = 16) -> Fraction:
    return rational(rng, lo, hi, max_den)


def points(rng: random.Random, amb: Ambient, k: int, max_den: int = MAX_DEN) -> List[Fraction]:
    """At most k distinct sorted points strictly inside the ambient (a window of width 20 if unbounded)."""
    a = amb.a if is_finite(amb.a) else None
    b = amb.b if is_finite(amb.b) else None
    if a is None and b is None:
        a, b = Fraction(-10), Fraction(10)
    elif a is None:
        a = b - 20
    elif b is None:
        b = a + 20
    width = b - a
    # x = a + width * k / den, built as a single fraction
    p, q, r, t = a.numerator, a.denominator, width.numerator, width.denominator
    out = set()
    for _ in range(k):
        den = rng.randint(2, max_den)
        out.add(Fraction(p * t * den + r * q * rng.randint(1, den - 1), q * t * den))
    return sorted(out)


def elementary_set(rng: random.Random, amb: Ambient, max_intervals: int = 4, max_den: int = MAX_DEN) -> ElementarySet:
    """Random normal-form set, sometimes touching the ambient ends."""
    k = rng.randint(0, 2 * max_intervals)
    pts = points(rng, amb, k, max_den)
    ends = [amb.a] if rng.random() < 0.25 else []
    pts = ends + pts + ([amb.b] if rng.random() < 0.25 else [])
    if len(pts) % 2:
        pts = pts[:-1]
    # distinct sorted points pair up into intervals with strict gaps
    return ElementarySet._raw(amb, tuple((pts[i], pts[i + 1]) for i in range(0, len(pts), 2)))


def partition(rng: random.Random, target: ElementarySet, max_cells: int = 5, max_den: int = MAX_DEN) -> List[ElementarySet]:
    """Random B-partition of target: cut at random points and group pieces into cells."""
    amb = target.ambient
    if target.is_empty:
        return []
    cuts = points(rng, amb, rng.randint(0, 6), max_den)
    pieces: List[ElementarySet] = []
    bounds = [amb.a, *cuts, amb.b]
    for lo, hi in zip(bounds, bounds[1:]):
        piece = meet(target, regularize([(lo, hi)], amb))
        if not piece.is_empty:
            pieces.append(piece)
    n = rng.randint(1, max_cells)
    groups: List[List[ElementarySet]] = [[] for _ in range(n)]
    for p in pieces:
        groups[rng.randrange(n)].append(p)
    cells = [join_all(g, amb) for g in groups if g]
    return cells


def piecewise_affine(rng: random.Random, amb: Ambient, max_pieces: int = 5, max_den: int = 1000, scale: int = 5) -> PiecewiseAffine:
    xs = points(rng, amb, rng.randint(1, max_pieces + 1), max_den)
    if rng.random() < 0.3 and amb.bounded:
        xs = sorted(set([amb.a, *xs, amb.b]))
    if not xs:
        xs = [amb.a if is_finite(amb.a) else Fraction(0)]
    ys = [rational(rng, -scale, scale, max_den) for _ in xs]
    return PiecewiseAffine(amb, tuple(xs), tuple(ys))


def point_mass(rng: random.Random, amb: Ambient, max_den: int = MAX_DEN) -> PointMass:
    x = points(rng, amb, 1, max_den)[0]
    return PointMass(amb, x, rng.choice((LEFT, RIGHT)))


def simple_rule(rng: random.Random, amb: Ambient, max_den: int = MAX_DEN):
    """One of Lebesgue, a point mass or an end germ, as the ambient allows."""
    choices = ["point"]
    if amb.bounded:
        choices.append("lebesgue")
    ends = []
    if is_finite(amb.a):
        ends.append(END_AMBIENT_LEFT)
    if is_finite(amb.b):
        ends.append(END_AMBIENT_RIGHT)
    if not is_finite(amb.a):
        ends.append("neg_inf")
    if not is_finite(amb.b):
        ends.append("pos_inf")
    choices.append("end")
    kind = rng.choice(choices)
    if kind == "lebesgue":
        return Lebesgue(amb)
    if kind == "end":
        return EndMass(amb, rng.choice(ends))
    return point_mass(rng, amb, max_den)


def mixture_credence(rng: random.Random, amb: Ambient, max_parts: int = 4, max_den: int = MAX_DEN, ends: bool = True):
    """Random mixture of the simple rules with positive rational weights summing to 1."""
    k = rng.randint(1, max_parts)
    parts = []
    for _ in range(k):
        mu = simple_rule(rng, amb, max_den)
        while not ends and isinstance(mu, EndMass):
            mu = simple_rule(rng, amb, max_den)
        parts.append(mu)
    raw = [rng.randint(1, 20) for _ in parts]
    total = sum(raw)
    ws = [Fraction(r, total) for r in raw]
    if k == 1:
        return parts[0]
    return Mixture(tuple(zip(ws, parts)))


def liminal_mixture(rng: random.Random, amb: Ambient, max_atoms: int = 4, grid: int = 32):
    """Lebesgue plus one-sided atoms on grid points of a closed interval."""
    a, b = amb.a, amb.b
    parts = []
    if rng.random() < 0.8:
        parts.append(Lebesgue(amb))
    for _ in range(rng.randint(0 if parts else 1, max_atoms)):
        x = a + (b - a) * Fraction(rng.randint(0, grid), grid)
        if x == a:
            side = RIGHT
        elif x == b:
            side = LEFT
        else:
            side = rng.choice((LEFT, RIGHT))
        parts.append(PointMass(amb, x, side))
    raw = [rng.randint(1, 12) for _ in parts]
    total = sum(raw)
    if len(parts) == 1:
        return parts[0]
    return Mixture(tuple((Fraction(r, total), p) for r, p in zip(raw, parts)))


def unit_closed() -> Ambient:
    return closed_interval(0, 1)


def bpartition(rng: random.Random, amb: Ambient, max_cells: int = 5, max_den: int = MAX_DEN) -> BPartition:
    W = whole(amb)
    return BPartition(W, tuple(partition(rng, W, max_cells, max_den)))
