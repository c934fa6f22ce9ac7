"""Liminal density representation of mixture credences on a compact interval.

A mixture of Lebesgue measure and one-sided point masses on ``[a, b]`` is a
Borel measure ``ν`` (Lebesgue part plus atoms) together with, for each atom,
the split of its mass between the left and the right germ.  A regular set
``R`` then gets the full mass of atoms inside it and the matching share of
atoms on its boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

from .credence import (
    END_AMBIENT_LEFT,
    END_AMBIENT_RIGHT,
    LEFT,
    RIGHT,
    AtomTable,
    Credence,
    EndMass,
    Lebesgue,
    Mixture,
    PointMass,
)
from .elementary_algebra import (
    CLOSED_INTERVAL,
    OPEN_INTERVAL,
    Ambient,
    ElementarySet,
    boundary,
    closed_interval,
    extend,
    fmt_ext,
)
from .errors import ArtifactError
from .integrator import PiecewiseAffine, integrate_exact

ZERO = Fraction(0)


@dataclass(frozen=True)
class BorelPart:
    lebesgue_weight: Fraction
    atoms: Tuple[Tuple[Fraction, Fraction], ...]  # (point, mass), sorted by point

    def __post_init__(self):
        if self.lebesgue_weight < 0 or any(m <= 0 for _, m in self.atoms):
            raise ArtifactError("BAD_CREDENCE", "Borel part needs nonnegative Lebesgue weight and positive atoms")
        if self.lebesgue_weight + sum((m for _, m in self.atoms), ZERO) != 1:
            raise ArtifactError("BAD_CREDENCE", "Borel part must have total mass 1")
        pts = [x for x, _ in self.atoms]
        if pts != sorted(set(pts)):
            raise ArtifactError("BAD_CREDENCE", "atom points must be distinct and sorted")

    def mass_of_interval(self, lo, hi, ambient, closed_lo: bool, closed_hi: bool) -> Fraction:
        """ν of the interval with the given endpoint inclusions."""
        total = self.lebesgue_weight * (hi - lo) / ambient.length
        for x, m in self.atoms:
            if lo < x < hi or (closed_lo and x == lo) or (closed_hi and x == hi):
                total += m
        return total


@dataclass(frozen=True)
class LiminalRule:
    shares: Dict[Fraction, Tuple[Fraction, Fraction]] = field(default_factory=dict)  # x -> (left, right)

    def __post_init__(self):
        for x, (l, r) in self.shares.items():
            if l < 0 or r < 0 or l + r != 1:
                raise ArtifactError("BAD_CREDENCE", f"shares at {fmt_ext(x)} must be nonnegative and sum to 1")

    def __hash__(self):
        return hash(tuple(sorted(self.shares.items())))


@dataclass(frozen=True)
class Decomposition:
    ambient: Ambient
    borel: BorelPart
    rule: LiminalRule

    def to_json(self) -> dict:
        atoms = []
        for x, m in self.borel.atoms:
            left, right = self.rule.shares[x]
            atoms.append({"x": fmt_ext(x), "mass": fmt_ext(m), "left": fmt_ext(left), "right": fmt_ext(right)})
        return {"lebesgue_weight": fmt_ext(self.borel.lebesgue_weight), "atoms": atoms}


def _flatten(mu: Credence, weight: Fraction, out: List[Tuple[Fraction, Credence]]) -> None:
    if isinstance(mu, Mixture):
        for w, part in mu.parts:
            _flatten(part, weight * w, out)
    else:
        out.append((weight, mu))


def decompose(mu: Credence) -> Decomposition:
    """Split a Lebesgue / point-mass mixture on [a, b] into Borel part and side shares.

    An end germ at a closed end is the inward point mass at that end.
    """
    amb = mu.ambient
    if amb.kind != CLOSED_INTERVAL:
        raise ArtifactError("UNSUPPORTED_RULE", f"decompose needs a compact ambient, got {amb}; compactify first")
    parts: List[Tuple[Fraction, Credence]] = []
    _flatten(mu, Fraction(1), parts)
    lw = ZERO
    sides: Dict[Fraction, List[Fraction]] = {}
    for w, part in parts:
        if isinstance(part, Lebesgue):
            lw += w
            continue
        if isinstance(part, EndMass):
            if part.end == END_AMBIENT_LEFT:
                part = PointMass(amb, amb.a, RIGHT)
            elif part.end == END_AMBIENT_RIGHT:
                part = PointMass(amb, amb.b, LEFT)
        if not isinstance(part, PointMass):
            raise ArtifactError("UNSUPPORTED_RULE", f"rule {part.rule!r} is outside the mixture family")
        acc = sides.setdefault(part.x, [ZERO, ZERO])
        acc[0 if part.side == LEFT else 1] += w
    atoms = tuple((x, l + r) for x, (l, r) in sorted(sides.items()))
    shares = {x: (l / (l + r), r / (l + r)) for x, (l, r) in sides.items()}
    return Decomposition(amb, BorelPart(lw, atoms), LiminalRule(shares))


def share_into(R: ElementarySet, x: Fraction, shares: Tuple[Fraction, Fraction]) -> Fraction:
    """φ_R(x): the part of the atom at x that R receives through its germs."""
    left, right = shares
    from_left = any(lo < x <= hi for lo, hi in R.intervals)
    from_right = any(lo <= x < hi for lo, hi in R.intervals)
    return (left if from_left else ZERO) + (right if from_right else ZERO)


def borel_measure(dec: Decomposition, R: ElementarySet) -> Fraction:
    """ν(R) for the point set R (half-open pieces at the ambient ends included)."""
    amb = R.ambient
    return sum(
        (dec.borel.mass_of_interval(lo, hi, amb, lo == amb.a, hi == amb.b) for lo, hi in R.intervals),
        ZERO,
    )


def boundary_term(dec: Decomposition, R: ElementarySet, g=None) -> Fraction:
    """∫_{∂R} g φ_R dν; g defaults to 1."""
    atoms = dict(dec.borel.atoms)
    total = ZERO
    for x in boundary(R):
        if x in atoms:
            weight = share_into(R, x, dec.rule.shares[x]) * atoms[x]
            total += weight * (g(x) if g is not None else 1)
    return total


def mass_identity_sides(mu: Credence, dec: Decomposition, R: ElementarySet) -> Tuple[Fraction, Fraction]:
    return mu.eval(R), borel_measure(dec, R) + boundary_term(dec, R)


def verify_mass_identity(mu: Credence, dec: Decomposition, R: ElementarySet) -> bool:
    """μ[R] = ν(R) + ∫_{∂R} φ_R dν, exactly."""
    left, right = mass_identity_sides(mu, dec, R)
    return left == right


def _antiderivative_integral(g: PiecewiseAffine, lo: Fraction, hi: Fraction) -> Fraction:
    # ∫ (y0 + s (t - x0)) dt = y0 (t - x0) + s (t - x0)^2 / 2 on each affine piece
    pts = [lo, *g.inner_breakpoints(lo, hi), hi]
    total = ZERO
    for s, t in zip(pts, pts[1:]):
        y0 = g(s)
        slope = (g(t) - y0) / (t - s)
        total += y0 * (t - s) + slope * (t - s) ** 2 / 2
    return total


def borel_integral(dec: Decomposition, g: PiecewiseAffine, R: ElementarySet) -> Fraction:
    """∫_R g dν with ν the Borel part."""
    amb = R.ambient
    total = ZERO
    for lo, hi in R.intervals:
        total += dec.borel.lebesgue_weight * _antiderivative_integral(g, lo, hi) / amb.length
        for x, m in dec.borel.atoms:
            if lo < x < hi or (x == lo == amb.a) or (x == hi == amb.b):
                total += g(x) * m
    return total


def integral_identity_sides(mu, dec: Decomposition, g: PiecewiseAffine, R: ElementarySet):
    return integrate_exact(g, mu, R), borel_integral(dec, g, R) + boundary_term(dec, R, g)


def verify_integral_identity(mu: Credence, dec: Decomposition, g: PiecewiseAffine, R: ElementarySet) -> bool:
    """I_R[g] = ∫_R g dν + ∫_{∂R} g φ_R dν, exactly."""
    left, right = integral_identity_sides(mu, dec, g, R)
    return left == right


def consistency(dec: Decomposition, cells) -> bool:
    """Σ_n φ_{R_n}(x) = 1 at every atom, for a partition of the whole ambient."""
    for x, _ in dec.borel.atoms:
        if sum((share_into(C, x, dec.rule.shares[x]) for C in cells), ZERO) != 1:
            return False
    return True


def compactify(mu: Credence) -> Credence:
    """Move a credence on (a, b) to [a, b] via R̄ ↦ R̄ ∩ (a, b).

    End germs become inward point masses at the new closed ends.
    """
    amb = mu.ambient
    if amb.kind == CLOSED_INTERVAL:
        return mu
    if amb.kind != OPEN_INTERVAL or not amb.bounded:
        raise ArtifactError("UNBOUNDED_AMBIENT", str(amb))
    bar = closed_interval(amb.a, amb.b)
    if isinstance(mu, Lebesgue):
        return Lebesgue(bar)
    if isinstance(mu, PointMass):
        return PointMass(bar, mu.x, mu.side)
    if isinstance(mu, EndMass):
        if mu.end == END_AMBIENT_LEFT:
            return PointMass(bar, amb.a, RIGHT)
        return PointMass(bar, amb.b, LEFT)
    if isinstance(mu, Mixture):
        return Mixture(tuple((w, compactify(p)) for w, p in mu.parts))
    if isinstance(mu, AtomTable):
        from .stone_rep import generate

        alg = mu.algebra
        bar_alg = generate([extend(G) for G in alg.generators], bar)
        # atoms correspond one to one through the extension isomorphism
        weights = [None] * len(bar_alg.atoms)
        for i, A in enumerate(alg.atoms):
            weights[bar_alg.atoms.index(extend(A))] = mu.weights[i]
        return AtomTable(bar_alg, tuple(weights))
    raise ArtifactError("UNSUPPORTED_RULE", f"cannot compactify rule {mu.rule!r}")


def open_interval_mass(dec: Decomposition, lo, hi) -> Fraction:
    """ν of the open interval (lo, hi); with (lo, hi) = (a, b) this is the part living on (a, b)."""
    return dec.borel.mass_of_interval(lo, hi, dec.ambient, False, False)
