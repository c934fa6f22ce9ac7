"""B-partitions, simple functions, and the integrators built from them.

``integrate`` is the supremum-of-minorants integral realised by one explicit
level-set minorant; ``integrate_exact`` is a closed form for the rule-based
credences and is used as the cross-check.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Sequence, Tuple

from .credence import (
    END_AMBIENT_LEFT,
    END_NEG_INF,
    AtomTable,
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
    meet,
    neg,
    regularize,
    to_rational,
    validate_partition,
    whole,
)
from .errors import ArtifactError

ZERO = Fraction(0)


@dataclass(frozen=True)
class BPartition:
    target: ElementarySet
    cells: Tuple[ElementarySet, ...]

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(self.cells))
        validate_partition(self.target, self.cells)


@dataclass(frozen=True)
class SimpleFunction:
    """Constant on each cell of a partition of the whole ambient; no boundary values."""

    partition: BPartition
    values: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(to_rational(v) for v in self.values))
        if len(self.values) != len(self.partition.cells):
            raise ArtifactError("BAD_FUNCTION", "one value per cell is required")
        if not self.partition.target.is_whole:
            raise ArtifactError("BAD_FUNCTION", "a simple function lives on a partition of the whole ambient")

    @property
    def ambient(self) -> Ambient:
        return self.partition.target.ambient

    def cells(self) -> Iterator[Tuple[ElementarySet, Fraction]]:
        return zip(self.partition.cells, self.values)


def constant_function(ambient: Ambient, r) -> SimpleFunction:
    S = whole(ambient)
    return SimpleFunction(BPartition(S, (S,)), (to_rational(r),))


def _refined_cells(P: BPartition, Q: BPartition) -> List[Tuple[int, int, ElementarySet]]:
    if P.target != Q.target:
        raise ArtifactError("TARGET_MISMATCH", "partitions of different targets")
    out = []
    for i, A in enumerate(P.cells):
        for j, B in enumerate(Q.cells):
            C = meet(A, B)
            if not C.is_empty:
                out.append((i, j, C))
    return out


def refine(P: BPartition, Q: BPartition) -> BPartition:
    """Minimal common refinement: the nonempty pairwise meets."""
    return BPartition(P.target, tuple(C for _, _, C in _refined_cells(P, Q)))


def add_simple(f: SimpleFunction, h: SimpleFunction, a=1, b=1) -> SimpleFunction:
    """The simple function a*f + b*h on the common refinement."""
    a, b = to_rational(a), to_rational(b)
    triples = _refined_cells(f.partition, h.partition)
    part = BPartition(f.partition.target, tuple(C for _, _, C in triples))
    return SimpleFunction(part, tuple(a * f.values[i] + b * h.values[j] for i, j, _ in triples))


def simple_integral(f: SimpleFunction, mu: Credence, B: ElementarySet) -> Fraction:
    """Sum of r_n mu[P_n ∧ B]; the empty set integrates to 0."""
    if B.is_empty:
        return ZERO
    return sum((v * mu.eval(meet(P, B)) for P, v in f.cells() if v), ZERO)


# --- piecewise-affine integrands -------------------------------------------


@dataclass(frozen=True)
class PiecewiseAffine:
    """Continuous piecewise-affine function, constant beyond its outer breakpoints."""

    ambient: Ambient
    breakpoints: Tuple[Fraction, ...]
    values: Tuple[Fraction, ...]

    def __post_init__(self):
        xs = tuple(to_rational(x) for x in self.breakpoints)
        ys = tuple(to_rational(y) for y in self.values)
        if not xs or len(xs) != len(ys):
            raise ArtifactError("BAD_FUNCTION", "need matching, nonempty breakpoints and values")
        if any(not x0 < x1 for x0, x1 in zip(xs, xs[1:])):
            raise ArtifactError("BAD_FUNCTION", "breakpoints must be strictly increasing")
        if xs[0] < self.ambient.a or xs[-1] > self.ambient.b:
            raise ArtifactError("BAD_FUNCTION", f"breakpoints escape {self.ambient}")
        object.__setattr__(self, "breakpoints", xs)
        object.__setattr__(self, "values", ys)

    def __call__(self, x) -> Fraction:
        xs, ys = self.breakpoints, self.values
        if x <= xs[0]:
            return ys[0]
        if x >= xs[-1]:
            return ys[-1]
        lo, hi = 0, len(xs) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if xs[mid] <= x:
                lo = mid
            else:
                hi = mid
        x0, x1, y0, y1 = xs[lo], xs[hi], ys[lo], ys[hi]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    @property
    def sup_norm(self) -> Fraction:
        return max(abs(y) for y in self.values)

    def inner_breakpoints(self, lo, hi) -> List[Fraction]:
        return [x for x in self.breakpoints if lo < x < hi]

    def inf_on(self, E: ElementarySet) -> Fraction:
        """Infimum over a nonempty set (attained at an endpoint or breakpoint of its closure)."""
        if E.is_empty:
            raise ArtifactError("EMPTY_SET", "infimum over the empty set")
        return min(self(t) for lo, hi in E.intervals for t in [lo, hi, *self.inner_breakpoints(lo, hi)])

    def sup_on(self, E: ElementarySet) -> Fraction:
        if E.is_empty:
            raise ArtifactError("EMPTY_SET", "supremum over the empty set")
        return max(self(t) for lo, hi in E.intervals for t in [lo, hi, *self.inner_breakpoints(lo, hi)])

    def scaled(self, a, b=0) -> "PiecewiseAffine":
        """The function a*g + b."""
        a, b = to_rational(a), to_rational(b)
        return PiecewiseAffine(self.ambient, self.breakpoints, tuple(a * y + b for y in self.values))

    def pieces(self) -> Iterator[Tuple[Fraction, Fraction, Fraction, Fraction]]:
        xs, ys = self.breakpoints, self.values
        for i in range(len(xs) - 1):
            yield xs[i], xs[i + 1], ys[i], ys[i + 1]


def constant(ambient: Ambient, c) -> PiecewiseAffine:
    mid = ambient.a if is_finite(ambient.a) else (ambient.b - 1 if is_finite(ambient.b) else Fraction(0))
    return PiecewiseAffine(ambient, (mid,), (to_rational(c),))


def _cut_points(g: PiecewiseAffine, levels: Sequence[Fraction]) -> List:
    """Ambient ends, inner breakpoints and every crossing of the given (sorted) levels."""
    amb = g.ambient
    pts = {amb.a, amb.b}
    pts.update(x for x in g.breakpoints if amb.a < x < amb.b)
    for x0, x1, y0, y1 in g.pieces():
        if y0 == y1:
            continue
        lo, hi = min(y0, y1), max(y0, y1)
        for c in levels[bisect_right(levels, lo):bisect_left(levels, hi)]:
            t = x0 + (c - y0) * (x1 - x0) / (y1 - y0)
            if amb.a < t < amb.b:
                pts.add(t)
    return sorted(pts)


def _segments(g: PiecewiseAffine, levels: Sequence[Fraction]):
    pts = _cut_points(g, levels)
    return list(zip(pts, pts[1:]))


def level_set_interior(g: PiecewiseAffine, lo, hi) -> ElementarySet:
    """int(g^{-1}[lo, hi]) computed exactly; either bound may be infinite."""
    levels = [c for c in (lo, hi) if is_finite(c)]
    keep = []
    for s, t in _segments(g, levels):
        # g is affine on (s, t) with no level crossing inside; test its endpoints' hull
        vs, vt = g(s), g(t)
        if lo <= min(vs, vt) and max(vs, vt) <= hi:
            keep.append((s, t))
    return regularize(keep, g.ambient)


def level_minorant(g: PiecewiseAffine, N: int) -> SimpleFunction:
    """The level-set minorant with mesh 1/N.

    With ``B_m = int(g^{-1}[m/N, (m+1)/N])`` the cells are
    ``P_m = B_m ∧ ¬B_{m+1}`` carrying the value ``m/N``.  Cells are built in one
    sweep: between consecutive cut points g crosses no level, so a segment
    belongs to ``P_m`` with ``m = floor(N * inf g)`` on that segment.
    """
    groups, _ = _level_groups(g, N)
    labels = sorted(groups)
    cells = tuple(regularize(groups[m], g.ambient) for m in labels)
    return SimpleFunction(BPartition(whole(g.ambient), cells), tuple(Fraction(m, N) for m in labels))


def _level_groups(g: PiecewiseAffine, N: int):
    """Segments grouped by level index m, plus the least value of g on each group's closure.

    Walks the affine pieces in order, so crossings arrive sorted and carry their
    level value without re-evaluating g.
    """
    if N < 1:
        raise ArtifactError("BAD_FUNCTION", "N must be a positive integer")
    amb = g.ambient
    nodes = [amb.a, *(x for x in g.breakpoints if amb.a < x < amb.b), amb.b]
    vals = [g(x) for x in nodes]
    groups: Dict[int, List] = {}
    least: Dict[int, Fraction] = {}

    def add(s, t, v, m=None):
        m = math.floor(v * N) if m is None else m
        groups.setdefault(m, []).append((s, t))
        if m not in least or v < least[m]:
            least[m] = v

    for s, t, vs, vt in zip(nodes, nodes[1:], vals, vals[1:]):
        if vs == vt:
            add(s, t, vs)
            continue
        # finite piece on which g is affine and not constant
        if vs < vt:
            ks = range(math.floor(vs * N) + 1, math.ceil(vt * N))
        else:
            ks = range(math.ceil(vs * N) - 1, math.floor(vt * N), -1)
        if not ks:
            add(s, t, min(vs, vt))
            continue
        dx = (t - s) / (vt - vs)
        cuts = [s + (Fraction(k, N) - vs) * dx for k in ks]
        add(s, cuts[0], min(vs, Fraction(ks[0], N)))
        for a, b, k0, k1 in zip(cuts, cuts[1:], ks, ks[1:]):
            k = min(k0, k1)
            add(a, b, Fraction(k, N), k)
        add(cuts[-1], t, min(vt, Fraction(ks[-1], N)))
    return groups, least


def level_minorant_reference(g: PiecewiseAffine, N: int) -> SimpleFunction:
    """Same minorant, built literally from the sets B_m with Boolean operations."""
    ys = g.values
    lo_m = math.floor(min(ys) * N)
    hi_m = math.floor(max(ys) * N)
    B = {m: level_set_interior(g, Fraction(m, N), Fraction(m + 1, N)) for m in range(lo_m, hi_m + 2)}
    cells, values = [], []
    for m in range(lo_m, hi_m + 1):
        P = meet(B[m], neg(B[m + 1]))
        if not P.is_empty:
            cells.append(P)
            values.append(Fraction(m, N))
    return SimpleFunction(BPartition(whole(g.ambient), tuple(cells)), tuple(values))


def tightened_minorant(g: PiecewiseAffine, N: int) -> SimpleFunction:
    """level_minorant with each cell value raised to inf g on that cell.

    Still below g and within 1/N of it; exact whenever g is constant on a cell.
    """
    # g is affine between cut points, so its infimum on a cell is the least endpoint value
    groups, least = _level_groups(g, N)
    labels = sorted(groups)
    cells = tuple(regularize(groups[m], g.ambient) for m in labels)
    return SimpleFunction(BPartition(whole(g.ambient), cells), tuple(least[m] for m in labels))


def mesh_for(eps) -> int:
    eps = to_rational(eps)
    if eps <= 0:
        raise ArtifactError("BAD_RATIONAL", "eps must be positive")
    return math.ceil(1 / eps)


def _check_function(g: PiecewiseAffine, mu: Credence, B: ElementarySet) -> None:
    if g.ambient != mu.ambient or B.ambient != mu.ambient:
        raise ArtifactError("AMBIENT_MISMATCH", "function, credence and set must share an ambient")


def integrate(g: PiecewiseAffine, mu: Credence, B: ElementarySet, eps) -> Fraction:
    """Lower approximation of I_B[g] within eps * mu[B]."""
    _check_function(g, mu, B)
    if B.is_empty:
        return ZERO
    return simple_integral(tightened_minorant(g, mesh_for(eps)), mu, B)


def integrate_trace(g: PiecewiseAffine, mu: Credence, B: ElementarySet, eps) -> List[Tuple[int, Fraction]]:
    """(N, minorant integral) for N = 1, 2, 4, ... up to the mesh demanded by eps."""
    _check_function(g, mu, B)
    target = mesh_for(eps)
    Ns = []
    N = 1
    while N < target:
        Ns.append(N)
        N *= 2
    Ns.append(target)
    return [(N, simple_integral(tightened_minorant(g, N), mu, B)) for N in Ns]


def _affine_integral(g: PiecewiseAffine, lo: Fraction, hi: Fraction) -> Fraction:
    """Exact integral of g over [lo, hi] by the trapezoid rule on affine pieces."""
    pts = [lo, *g.inner_breakpoints(lo, hi), hi]
    return sum(((t - s) * (g(s) + g(t)) / 2 for s, t in zip(pts, pts[1:])), ZERO)


def _end_value(g: PiecewiseAffine, mu: EndMass) -> Fraction:
    if mu.end in (END_NEG_INF, END_AMBIENT_LEFT):
        return g(mu.ambient.a)
    return g(mu.ambient.b)


def _is_constant_on(g: PiecewiseAffine, E: ElementarySet) -> bool:
    return g.inf_on(E) == g.sup_on(E)


def integrate_exact(g: PiecewiseAffine, mu: Credence, B: ElementarySet) -> Fraction:
    """Closed-form I_B[g] for the rule-based credences."""
    _check_function(g, mu, B)
    if B.is_empty:
        return ZERO
    if isinstance(mu, Lebesgue):
        total = sum((_affine_integral(g, lo, hi) for lo, hi in B.intervals), ZERO)
        return total / mu.ambient.length
    if isinstance(mu, PointMass):
        return g(mu.x) * mu.eval(B)
    if isinstance(mu, EndMass):
        return _end_value(g, mu) * mu.eval(B)
    if isinstance(mu, AtomTable):
        mask = mu.algebra.mask_of(B)
        total = ZERO
        for i, A in enumerate(mu.algebra.atoms):
            if mask >> i & 1 and mu.weights[i]:
                if not _is_constant_on(g, A):
                    raise ArtifactError("UNSUPPORTED_RULE", f"g is not constant on the atom {A}")
                total += g.inf_on(A) * mu.weights[i]
        return total
    if isinstance(mu, Mixture):
        return sum((w * integrate_exact(g, part, B) for w, part in mu.parts), ZERO)
    raise ArtifactError("UNSUPPORTED_RULE", f"no closed form for rule {mu.rule!r}")


def conditional_expectation(g: PiecewiseAffine, mu: Credence, B: ElementarySet, eps) -> Fraction:
    mass = mu.eval(B)
    if mass == 0:
        raise ArtifactError("ZERO_MASS_CONDITIONING", f"mu[{B}] = 0")
    return integrate(g, mu, B, eps) / mass


def conditional_expectation_exact(g: PiecewiseAffine, mu: Credence, B: ElementarySet) -> Fraction:
    mass = mu.eval(B)
    if mass == 0:
        raise ArtifactError("ZERO_MASS_CONDITIONING", f"mu[{B}] = 0")
    return integrate_exact(g, mu, B) / mass


def bayes_expectation(g: PiecewiseAffine, mu: Credence, partition: BPartition) -> Fraction:
    """Right side of the Bayes formula: (1/mu[B]) * sum mu[B_n] E_{B_n}[g], exactly.

    Cells of zero mass contribute nothing.
    """
    mass = mu.eval(partition.target)
    if mass == 0:
        raise ArtifactError("ZERO_MASS_CONDITIONING", "target has zero mass")
    total = ZERO
    for C in partition.cells:
        m = mu.eval(C)
        if m:
            total += m * conditional_expectation_exact(g, mu, C)
    return total / mass


# --- JSON ---------------------------------------------------------------------


def function_to_json(g: PiecewiseAffine) -> dict:
    return {
        "ambient": ambient_to_json(g.ambient),
        "breakpoints": [fmt_ext(x) for x in g.breakpoints],
        "values": [fmt_ext(y) for y in g.values],
    }


def function_from_json(obj, default_ambient: Ambient) -> PiecewiseAffine:
    if not isinstance(obj, dict) or "breakpoints" not in obj or "values" not in obj:
        raise ArtifactError("BAD_FUNCTION", "a function needs 'breakpoints' and 'values'")
    amb = ambient_from_json(obj["ambient"]) if "ambient" in obj else default_ambient
    return PiecewiseAffine(amb, tuple(obj["breakpoints"]), tuple(obj["values"]))


def simple_function_from_json(obj, ambient: Ambient) -> SimpleFunction:
    from .elementary_algebra import set_from_json

    cells = tuple(set_from_json({"intervals": c["intervals"]}, ambient) for c in obj["cells"])
    values = tuple(to_rational(c["value"]) for c in obj["cells"])
    return SimpleFunction(BPartition(whole(ambient), cells), values)

