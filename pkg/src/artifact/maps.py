"""Piecewise-affine maps between interval ambients, image credences, change of variables.

A :class:`MonotoneAffineMap` is strictly monotone, hence open, so the preimage
of a regular open set is regular and preimage is a Boolean homomorphism.  A
general :class:`PiecewiseMap` may fold or flatten; for it only the
copreimage ``int(φ⁻¹[clos B])`` makes sense.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .credence import (
    END_AMBIENT_LEFT,
    END_AMBIENT_RIGHT,
    END_NEG_INF,
    END_POS_INF,
    LEFT,
    RIGHT,
    Credence,
    EndMass,
    Lebesgue,
    Mixture,
    PointMass,
)
from .elementary_algebra import (
    NEG_INF,
    POS_INF,
    Ambient,
    ElementarySet,
    ambient_from_json,
    ambient_to_json,
    fmt_ext,
    is_finite,
    neg,
    regularize,
    to_rational,
)
from .errors import ArtifactError
from .integrator import PiecewiseAffine, integrate, integrate_exact


class _Map:
    """Shared evaluation and level solving.  Subclasses choose the tail behaviour."""

    domain: Ambient
    codomain: Ambient
    breakpoints: Tuple[Fraction, ...]
    values: Tuple[Fraction, ...]
    linear_tails: bool = False

    def _validate_data(self, min_points: int) -> None:
        xs = tuple(to_rational(x) for x in self.breakpoints)
        ys = tuple(to_rational(y) for y in self.values)
        if len(xs) < min_points or len(xs) != len(ys):
            raise ArtifactError("BAD_MAP", f"need at least {min_points} breakpoints with matching values")
        if any(not x0 < x1 for x0, x1 in zip(xs, xs[1:])):
            raise ArtifactError("BAD_MAP", "breakpoints must be strictly increasing")
        if xs[0] < self.domain.a or xs[-1] > self.domain.b:
            raise ArtifactError("BAD_MAP", f"breakpoints escape {self.domain}")
        object.__setattr__(self, "breakpoints", xs)
        object.__setattr__(self, "values", ys)

    def _pieces(self):
        """(x0, x1, y0, slope) for every affine piece, tails included."""
        xs, ys = self.breakpoints, self.values
        out = []
        if len(xs) == 1:
            return [(NEG_INF, POS_INF, ys[0], Fraction(0))]
        slopes = [(ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]) for i in range(len(xs) - 1)]
        first = slopes[0] if self.linear_tails else Fraction(0)
        last = slopes[-1] if self.linear_tails else Fraction(0)
        out.append((NEG_INF, xs[0], ys[0], first))
        for i in range(len(xs) - 1):
            out.append((xs[i], xs[i + 1], ys[i], slopes[i]))
        out.append((xs[-1], POS_INF, ys[-1], last))
        return out

    def __call__(self, x):
        xs, ys = self.breakpoints, self.values
        if not is_finite(x):
            if not self.linear_tails or len(xs) == 1:
                return ys[0] if x < 0 else ys[-1]
            slope = self._pieces()[0 if x < 0 else -1][3]
            if slope == 0:
                return ys[0] if x < 0 else ys[-1]
            return POS_INF if (slope > 0) == (x > 0) else NEG_INF
        for x0, x1, _, slope in self._pieces():
            if x <= x1:
                anchor_x, anchor_y = (x1, self._value_at_bp(x1)) if x0 == NEG_INF else (x0, self._value_at_bp(x0))
                return anchor_y + slope * (x - anchor_x)
        raise AssertionError("unreachable")

    def _value_at_bp(self, x):
        return self.values[self.breakpoints.index(x)]

    def solve(self, c) -> List[Fraction]:
        """Points t of the domain closure where the map crosses the value c transversally."""
        out = set()
        for x0, x1, y0, slope in self._pieces():
            if slope == 0:
                continue
            anchor = x1 if x0 == NEG_INF else x0
            ya = self._value_at_bp(anchor)
            t = anchor + (c - ya) / slope
            if x0 <= t <= x1 and self.domain.a <= t <= self.domain.b:
                out.add(t)
        return sorted(out)

    def as_function(self) -> PiecewiseAffine:
        """The map as an integrand on its domain (needs a bounded domain if tails are linear)."""
        pts = self._domain_points([])
        return PiecewiseAffine(self.domain, tuple(pts), tuple(self(t) for t in pts))

    def _domain_points(self, levels) -> List[Fraction]:
        amb = self.domain
        pts = {x for x in (amb.a, amb.b) if is_finite(x)}
        pts.update(x for x in self.breakpoints if amb.a <= x <= amb.b)
        for c in levels:
            if is_finite(c):
                pts.update(self.solve(c))
        return sorted(pts)

    def _check_codomain(self, B: ElementarySet) -> None:
        if B.ambient != self.codomain:
            raise ArtifactError("AMBIENT_MISMATCH", f"set on {B.ambient}, map into {self.codomain}")


@dataclass(frozen=True)
class PiecewiseMap(_Map):
    """Continuous piecewise-affine map with constant tails; need not be monotone."""

    domain: Ambient
    codomain: Ambient
    breakpoints: Tuple[Fraction, ...]
    values: Tuple[Fraction, ...]

    def __post_init__(self):
        self._validate_data(1)
        for t in self._domain_points([]) or [self.breakpoints[0]]:
            if not (self.codomain.a <= self(t) <= self.codomain.b):
                raise ArtifactError("BAD_MAP", f"value at {fmt_ext(t)} leaves {self.codomain}")


@dataclass(frozen=True)
class MonotoneAffineMap(_Map):
    """Strictly monotone piecewise-affine map, extended affinely past its breakpoints."""

    domain: Ambient
    codomain: Ambient
    breakpoints: Tuple[Fraction, ...]
    values: Tuple[Fraction, ...]
    linear_tails = True

    def __post_init__(self):
        self._validate_data(2)
        slopes = [p[3] for p in self._pieces()]
        if not (all(s > 0 for s in slopes) or all(s < 0 for s in slopes)):
            raise ArtifactError("BAD_MAP", "slopes must be all positive or all negative")
        dom, cod = self.domain, self.codomain
        lo_img, hi_img = (self(dom.a), self(dom.b)) if self.increasing else (self(dom.b), self(dom.a))
        if lo_img < cod.a or hi_img > cod.b:
            raise ArtifactError("BAD_MAP", f"image of {dom} leaves {cod}")
        if dom.is_closed:
            # a closed end must land on a closed end, or the map is not open
            if not (cod.is_closed and lo_img == cod.a and hi_img == cod.b):
                raise ArtifactError("BAD_MAP", "a closed domain must map onto a closed codomain")

    @property
    def increasing(self) -> bool:
        return self.values[1] > self.values[0]

    def inverse(self, y):
        """The unique domain point (possibly an infinite end) mapping to y, extended by clipping."""
        dom = self.domain
        if y == POS_INF or y == NEG_INF:
            return dom.b if (y == POS_INF) == self.increasing else dom.a
        ts = self.solve(y)
        if ts:
            return ts[0]
        # y lies beyond the image of the domain
        below = y < self(dom.a) if self.increasing else y > self(dom.a)
        return dom.a if below else dom.b


def preimage(phi: MonotoneAffineMap, B: ElementarySet) -> ElementarySet:
    """Exact φ⁻¹(B) for a strictly monotone map."""
    phi._check_codomain(B)
    dom = phi.domain
    raw = []
    for lo, hi in B.intervals:
        s, t = phi.inverse(lo), phi.inverse(hi)
        if not phi.increasing:
            s, t = t, s
        s, t = max(s, dom.a), min(t, dom.b)
        if s < t:
            raw.append((s, t))
    return regularize(raw, dom)


def copreimage(phi, B: ElementarySet) -> ElementarySet:
    """int(φ⁻¹[clos B]) for any piecewise-affine map."""
    phi._check_codomain(B)
    dom = phi.domain
    levels = [x for iv in B.intervals for x in iv]
    pts = [dom.a, *[p for p in phi._domain_points(levels) if dom.a < p < dom.b], dom.b]
    keep = []
    for s, t in zip(pts, pts[1:]):
        v = phi(_inner_point(s, t))
        if any(lo <= v <= hi for lo, hi in B.intervals):
            keep.append((s, t))
    return regularize(keep, dom)


def _inner_point(s, t):
    if is_finite(s) and is_finite(t):
        return (s + t) / 2
    if is_finite(s):
        return s + 1
    if is_finite(t):
        return t - 1
    return Fraction(0)


def compose(g: PiecewiseAffine, phi) -> PiecewiseAffine:
    """g∘φ as a piecewise-affine function on φ's domain."""
    if g.ambient != phi.codomain:
        raise ArtifactError("AMBIENT_MISMATCH", f"g on {g.ambient}, map into {phi.codomain}")
    pts = phi._domain_points(g.breakpoints)
    if not pts:
        # unbounded domain with no breakpoints hit: g∘φ is affine, sample two points
        pts = [Fraction(0), Fraction(1)]
    return PiecewiseAffine(phi.domain, tuple(pts), tuple(g(phi(t)) for t in pts))


def compose_maps(psi, phi):
    """ψ∘φ; monotone if both factors are."""
    if psi.domain != phi.codomain:
        raise ArtifactError("AMBIENT_MISMATCH", "ψ must start where φ lands")
    pts = phi._domain_points(psi.breakpoints)
    both_monotone = isinstance(psi, MonotoneAffineMap) and isinstance(phi, MonotoneAffineMap)
    if both_monotone:
        pts = pts or [Fraction(0)]
        if len(pts) < 2:
            pts = [pts[0], pts[0] + 1]
        return MonotoneAffineMap(phi.domain, psi.codomain, tuple(pts), tuple(psi(phi(t)) for t in pts))
    pts = pts or [Fraction(0)]
    return PiecewiseMap(phi.domain, psi.codomain, tuple(pts), tuple(psi(phi(t)) for t in pts))


def identity_map(ambient: Ambient) -> MonotoneAffineMap:
    a = ambient.a if is_finite(ambient.a) else (ambient.b - 1 if is_finite(ambient.b) else Fraction(0))
    return MonotoneAffineMap(ambient, ambient, (a, a + 1), (a, a + 1))


# --- image credences ----------------------------------------------------------


@dataclass(frozen=True)
class ImageCredence(Credence):
    """ν[B] := μ[φ⁻¹(B)], kept symbolic when no closed-form rule matches."""

    base: Credence
    phi: MonotoneAffineMap
    rule = "image"

    @property
    def ambient(self) -> Ambient:
        return self.phi.codomain

    def _eval(self, E):
        return self.base.eval(preimage(self.phi, E))

    def to_json(self) -> dict:
        from .credence import credence_to_json

        return {"map": map_to_json(self.phi), "of": credence_to_json(self.base)}


def _end_germ(phi: MonotoneAffineMap, at_left_end: bool) -> Credence:
    """Image of the germ at a domain end: a germ at φ(end), pointing inward."""
    dom, cod = phi.domain, phi.codomain
    x = dom.a if at_left_end else dom.b
    y = phi(x)
    # the germ points right in the codomain iff it pointed right in the domain and φ increases
    points_right = at_left_end == phi.increasing
    if y == cod.a:
        return EndMass(cod, END_NEG_INF if y == NEG_INF else END_AMBIENT_LEFT)
    if y == cod.b:
        return EndMass(cod, END_POS_INF if y == POS_INF else END_AMBIENT_RIGHT)
    return PointMass(cod, y, RIGHT if points_right else LEFT)


def _is_affine(phi: MonotoneAffineMap) -> bool:
    return len({p[3] for p in phi._pieces()}) == 1


def pushforward(phi: MonotoneAffineMap, mu: Credence) -> Credence:
    """The image credence, in closed form whenever the rule family allows it."""
    if mu.ambient != phi.domain:
        raise ArtifactError("AMBIENT_MISMATCH", f"credence on {mu.ambient}, map from {phi.domain}")
    dom, cod = phi.domain, phi.codomain
    if isinstance(mu, Mixture):
        return Mixture(tuple((w, pushforward(phi, part)) for w, part in mu.parts))
    if isinstance(mu, PointMass):
        side = mu.side if phi.increasing else (LEFT if mu.side == RIGHT else RIGHT)
        return PointMass(cod, phi(mu.x), side)
    if isinstance(mu, EndMass):
        return _end_germ(phi, mu.end in (END_NEG_INF, END_AMBIENT_LEFT))
    if isinstance(mu, Lebesgue) and _is_affine(phi) and cod.bounded:
        onto = {phi(dom.a), phi(dom.b)} == {cod.a, cod.b}
        if onto:
            return Lebesgue(cod)
    return ImageCredence(base=mu, phi=phi)


def change_of_variables_values(phi, mu, g: PiecewiseAffine, B: ElementarySet, eps=None):
    """(left, right) = (I^μ_A[g∘φ], I^ν_B[g]) with A = φ⁻¹(B); exact when eps is None."""
    A = preimage(phi, B)
    nu = pushforward(phi, mu)
    gphi = compose(g, phi)
    if eps is None:
        return integrate_exact(gphi, mu, A), integrate_exact(g, nu, B)
    return integrate(gphi, mu, A, eps), integrate(g, nu, B, eps)


def change_of_variables_check(phi, mu, g: PiecewiseAffine, B: ElementarySet, eps=None) -> bool:
    """Exact equality when eps is None, otherwise agreement within 2*eps."""
    left, right = change_of_variables_values(phi, mu, g, B, eps)
    if eps is None:
        return left == right
    return abs(left - right) <= 2 * to_rational(eps)


def preserves_negation(phi, C: ElementarySet) -> bool:
    """φ^←(¬C) ⊆ ¬φ^←(C)."""
    return copreimage(phi, neg(C)).issubset(neg(copreimage(phi, C)))


def folding_witness() -> Tuple[PiecewiseMap, ElementarySet]:
    """A non-open map and a set on which negation is not preserved.

    The map folds (0, 1) onto [0, 1) with a plateau at 0 on (1/4, 3/4); a fold
    without a plateau would not do, since a non-constant affine piece pulls a
    finite boundary back to a finite set.
    """
    from .elementary_algebra import interval_set, open_interval

    dom = open_interval(0, 1)
    cod = open_interval(-1, 1)
    phi = PiecewiseMap(dom, cod, (Fraction(0), Fraction(1, 4), Fraction(3, 4), Fraction(1)),
                       (Fraction(1), Fraction(0), Fraction(0), Fraction(1)))
    return phi, interval_set(cod, 0, 1)


# --- JSON ---------------------------------------------------------------------


def map_to_json(phi) -> dict:
    return {
        "ambient": ambient_to_json(phi.domain),
        "codomain": ambient_to_json(phi.codomain),
        "breakpoints": [fmt_ext(x) for x in phi.breakpoints],
        "values": [fmt_ext(y) for y in phi.values],
    }


def map_from_json(obj, default_domain: Optional[Ambient] = None):
    """A strictly monotone description becomes a MonotoneAffineMap, anything else a PiecewiseMap."""
    if not isinstance(obj, dict) or "breakpoints" not in obj or "values" not in obj or "codomain" not in obj:
        raise ArtifactError("BAD_MAP", "a map needs 'breakpoints', 'values' and 'codomain'")
    from .elementary_algebra import REAL_LINE

    dom = ambient_from_json(obj["ambient"]) if "ambient" in obj else (default_domain or REAL_LINE)
    cod = ambient_from_json(obj["codomain"])
    xs = tuple(to_rational(x) for x in obj["breakpoints"])
    ys = tuple(to_rational(y) for y in obj["values"])
    diffs = [y1 - y0 for y0, y1 in zip(ys, ys[1:])]
    if diffs and (all(d > 0 for d in diffs) or all(d < 0 for d in diffs)):
        return MonotoneAffineMap(dom, cod, xs, ys)
    return PiecewiseMap(dom, cod, xs, ys)
