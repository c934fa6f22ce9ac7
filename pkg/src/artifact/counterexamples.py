"""Finite-depth constructions showing that countably additive measures fail to be credences.

Both constructions produce an open dense set ``U`` in ``[0, 1]`` whose two
"halves" ``L`` and ``R`` are disjoint elementary sets with ``L ∨ R`` growing
towards the whole interval, while ``ν(L) + ν(R) = ν(U)`` stays below 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from .elementary_algebra import (
    ElementarySet,
    closed_interval,
    fmt_ext,
    join,
    open_interval,
    to_rational,
)
from .errors import ArtifactError
from .integrator import PiecewiseAffine

ZERO = Fraction(0)
UNIT = open_interval(0, 1)
RESOLUTION_FLOOR = Fraction(1, 2 ** 64)


MATERIALIZE_LIMIT = 16


@dataclass(frozen=True)
class CantorStage:
    """Stage n of a middle-removal construction.

    Every block of stage k has the same width, so lengths are tracked exactly
    per stage; the removed set itself is built only up to MATERIALIZE_LIMIT.
    """

    depth: int
    ratios: Tuple[Fraction, ...]
    widths: Tuple[Fraction, ...]  # block width after stage k, k = 0..n
    gap_lengths: Tuple[Fraction, ...]  # length of each middle removed at stage k = 1..n

    @property
    def measure(self) -> Fraction:
        """λ(U_n), summed stage by stage: 2^(k-1) middles at stage k."""
        return sum((2 ** k * g for k, g in enumerate(self.gap_lengths)), ZERO)

    @property
    def halves_measure(self) -> Fraction:
        """λ(L_n) + λ(R_n): each middle contributes two halves of its length."""
        return sum((2 ** k * 2 * (g / 2) for k, g in enumerate(self.gap_lengths)), ZERO)

    @property
    def max_gap(self):
        """Distance bound from [0,1] to U_n: the end blocks dominate the half-widths of inner ones."""
        return self.widths[-1] if self.depth else float("inf")

    @property
    def removed(self) -> ElementarySet:
        if self.depth > MATERIALIZE_LIMIT:
            raise ArtifactError("CAP_EXCEEDED", f"depth {self.depth} exceeds {MATERIALIZE_LIMIT} for an explicit set")
        blocks = [(ZERO, Fraction(1))]
        gaps: List[Tuple[Fraction, Fraction]] = []
        for r in self.ratios:
            nxt = []
            for c, d in blocks:
                mid, half = (c + d) / 2, (d - c) * r / 2
                gaps.append((mid - half, mid + half))
                nxt += [(c, mid - half), (mid + half, d)]
            blocks = nxt
        return ElementarySet(UNIT, tuple(sorted(gaps)))


def quarter_ratios(depth: int) -> Tuple[Fraction, ...]:
    """Stage k removes a middle of absolute length 4^-k from each of its 2^(k-1) blocks."""
    return tuple(Fraction(1, 2 * (2 ** (k - 1) + 1)) for k in range(1, depth + 1))


def third_ratios(depth: int) -> Tuple[Fraction, ...]:
    return tuple(Fraction(1, 3) for _ in range(depth))


PRESETS = {"quarter": quarter_ratios, "third": third_ratios}


def fat_cantor(depth: int, ratios="quarter") -> CantorStage:
    """Remove from every block the open middle of relative length ratios[k] at stage k."""
    if depth < 0:
        raise ArtifactError("BAD_RATIO", "depth must be nonnegative")
    if isinstance(ratios, str):
        if ratios not in PRESETS:
            raise ArtifactError("BAD_RATIO", f"unknown preset {ratios!r}; choose from {', '.join(PRESETS)}")
        ratios = PRESETS[ratios](depth)
    try:
        ratios = tuple(to_rational(r) for r in ratios)
    except ArtifactError as exc:
        raise ArtifactError("BAD_RATIO", str(exc)) from exc
    if len(ratios) < depth:
        raise ArtifactError("BAD_RATIO", f"need {depth} ratios, got {len(ratios)}")
    ratios = ratios[:depth]
    for r in ratios:
        if not 0 < r < 1:
            raise ArtifactError("BAD_RATIO", f"ratio {r} is not in (0,1)")
    widths, gap_lengths = [Fraction(1)], []
    for r in ratios:
        gap_lengths.append(widths[-1] * r)
        widths.append(widths[-1] * (1 - r) / 2)
    return CantorStage(depth, ratios, tuple(widths), tuple(gap_lengths))


def quarter_measure(depth: int) -> Fraction:
    """Closed form of the removed length for the quarter preset."""
    return Fraction(1, 2) * (1 - Fraction(1, 2 ** depth))


def quarter_block_width(depth: int) -> Fraction:
    return Fraction(2 ** depth + 1, 2 ** (2 * depth + 1))


def left_right_halves(U: ElementarySet) -> Tuple[ElementarySet, ElementarySet]:
    if not U.ambient.bounded:
        raise ArtifactError("UNBOUNDED_AMBIENT", str(U.ambient))
    halves = [(lo, (lo + hi) / 2, hi) for lo, hi in U.intervals]
    L = ElementarySet(U.ambient, tuple((lo, m) for lo, m, _ in halves))
    R = ElementarySet(U.ambient, tuple((m, hi) for _, m, hi in halves))
    return L, R


def max_gap(U: ElementarySet) -> Fraction:
    """Largest distance from a point of the closed ambient interval to U.

    A gap touching an end of the interval counts in full; an interior gap
    counts half.  The empty set is at infinite distance.
    """
    amb = U.ambient
    if not amb.bounded:
        raise ArtifactError("UNBOUNDED_AMBIENT", str(amb))
    if U.is_empty:
        return float("inf")
    ivs = U.intervals
    best = max(ivs[0][0] - amb.a, amb.b - ivs[-1][1])
    for (_, hi), (lo, _) in zip(ivs, ivs[1:]):
        best = max(best, (lo - hi) / 2)
    return best


# --- the general atomless construction -----------------------------------------


def dyadic_sequence(count: int) -> List[Fraction]:
    """1/2, 1/4, 3/4, 1/8, 3/8, ...: a dense enumeration of the dyadic rationals in (0,1)."""
    out: List[Fraction] = []
    k = 1
    while len(out) < count:
        out += [Fraction(j, 2 ** k) for j in range(1, 2 ** k, 2)]
        k += 1
    return out[:count]


def _check_cdf(cdf: PiecewiseAffine) -> None:
    if cdf(0) != 0 or cdf(1) != 1:
        raise ArtifactError("BAD_FUNCTION", "a cdf on [0,1] runs from 0 to 1")
    pts = [Fraction(0), *cdf.inner_breakpoints(0, 1), Fraction(1)]
    if any(not cdf(s) < cdf(t) for s, t in zip(pts, pts[1:])):
        raise ArtifactError("BAD_FUNCTION", "the cdf must be strictly increasing on [0,1]")


def _nu(cdf: PiecewiseAffine, lo, hi) -> Fraction:
    return cdf(hi) - cdf(lo)


def admissible_radius(cdf: PiecewiseAffine, q: Fraction, bound: Fraction, steps: int = 16) -> Fraction:
    """A rational δ' with (q-δ', q+δ') ⊆ (0,1) and ν of it below bound.

    Halve until admissible, then bisect towards the largest admissible radius.
    """
    good = min(q, 1 - q)
    bad = None
    while not _nu(cdf, q - good, q + good) < bound:
        bad = good
        good /= 2
        if good < RESOLUTION_FLOOR:
            raise ArtifactError("EXHAUSTED", f"no admissible radius around {q} at resolution 2^-64")
    if bad is None:
        return good
    for _ in range(steps):
        mid = (good + bad) / 2
        if _nu(cdf, q - mid, q + mid) < bound:
            good = mid
        else:
            bad = mid
    return good


def _in_closure(O: List[Tuple[Fraction, Fraction]], x: Fraction) -> bool:
    return any(lo <= x <= hi for lo, hi in O)


def _distance(O: List[Tuple[Fraction, Fraction]], x: Fraction) -> Fraction:
    return min(lo - x if x <= lo else x - hi for lo, hi in O)


@dataclass(frozen=True)
class DenseStage:
    depth: int
    U: ElementarySet
    centers: Tuple[Fraction, ...]
    radii: Tuple[Fraction, ...]
    indices: Tuple[int, ...]  # m(n), one based
    measure: Fraction  # ν(U)
    bound: Fraction  # Σ 2^-m(n)

    @property
    def halves(self) -> Tuple[ElementarySet, ElementarySet]:
        return left_right_halves(self.U)


def dense_open_below_one(cdf: PiecewiseAffine, rs: Sequence, depth: int) -> DenseStage:
    """Grow O_1 ⊆ O_2 ⊆ ... by disjoint intervals around the first r not yet in the closure.

    The radius at step n is min(δ'_m, δ''/2): δ'_m bounds the ν-mass by 2^-m
    and halving the distance δ'' to O_n keeps the closures apart, so every O_n
    is elementary.
    """
    _check_cdf(cdf)
    rs = [to_rational(r) for r in rs]
    if len(set(rs)) != len(rs) or any(not 0 < r < 1 for r in rs):
        raise ArtifactError("BAD_RATIO", "the r-sequence must be distinct points of (0,1)")
    if depth < 0:
        raise ArtifactError("BAD_RATIO", "depth must be nonnegative")
    O: List[Tuple[Fraction, Fraction]] = []
    centers, radii, indices = [], [], []
    for n in range(depth):
        m = next((i for i, r in enumerate(rs) if not _in_closure(O, r)), None) if O else 0
        if m is None:
            raise ArtifactError("EXHAUSTED", f"every supplied r lies in clos(O_{n}); supply more points")
        q = rs[m]
        delta = admissible_radius(cdf, q, Fraction(1, 2 ** (m + 1)))
        if O:
            delta = min(delta, _distance(O, q) / 2)
        O.append((q - delta, q + delta))
        O.sort()
        centers.append(q)
        radii.append(delta)
        indices.append(m + 1)
    U = ElementarySet(UNIT, tuple(O))
    measure = sum((_nu(cdf, lo, hi) for lo, hi in O), ZERO)
    bound = sum((Fraction(1, 2 ** m) for m in indices), ZERO)
    return DenseStage(depth, U, tuple(centers), tuple(radii), tuple(indices), measure, bound)


def nu_of(cdf: PiecewiseAffine, E: ElementarySet) -> Fraction:
    return sum((_nu(cdf, lo, hi) for lo, hi in E.intervals), ZERO)


def atom_branch_witness(borel, x) -> dict:
    """For an atom x ∈ (0,1): L = [0,x), R = (x,1] have L ∨ R = [0,1] but miss the atom's mass."""
    x = to_rational(x)
    amb = closed_interval(0, 1)
    atoms = dict(borel.atoms)
    if not 0 < x < 1 or x not in atoms:
        raise ArtifactError("BAD_CREDENCE", f"{x} is not an atom of the measure in (0,1)")
    L = ElementarySet(amb, ((Fraction(0), x),))
    R = ElementarySet(amb, ((x, Fraction(1)),))

    def nu(E):
        return sum((borel.mass_of_interval(lo, hi, amb, lo == amb.a, hi == amb.b) for lo, hi in E.intervals), ZERO)

    total = nu(L) + nu(R)
    return {
        "L": L,
        "R": R,
        "join_is_whole": join(L, R).is_whole,
        "L_plus_R": total,
        "atom_mass": atoms[x],
        "deficit": 1 - total,
    }


def report(depth: int, measure: Fraction, gap, l_plus_r: Fraction) -> dict:
    return {"depth": depth, "measure": fmt_ext(measure), "gap": fmt_ext(gap), "L_plus_R": fmt_ext(l_plus_r)}


def cantor_report(stage: CantorStage) -> dict:
    return report(stage.depth, stage.measure, stage.max_gap, stage.halves_measure)


def cantor_rows(depth: int, ratios="quarter") -> List[dict]:
    """One report per stage 1..depth, for plotting."""
    return [cantor_report(fat_cantor(n, ratios)) for n in range(1, depth + 1)]


def dense_report(stage: DenseStage, cdf: PiecewiseAffine) -> dict:
    L, R = stage.halves
    out = report(stage.depth, stage.measure, max_gap(stage.U), nu_of(cdf, L) + nu_of(cdf, R))
    out["bound"] = fmt_ext(stage.bound)
    return out
