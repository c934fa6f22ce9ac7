"""Elementary regular open subsets of the line, in exact normal form.

An :class:`ElementarySet` is a finite union of open rational intervals with
strict gaps between them.  Inside a closed ambient ``[a, b]`` an interval whose
lower end equals ``a`` stands for the half-open piece ``[a, hi)`` (and
symmetrically at ``b``), which is exactly what the interior of a closure looks
like in the subspace topology.  With that convention every normal-form set is
regular, so the Boolean operations reduce to interval bookkeeping.

Finite endpoints are :class:`fractions.Fraction`; the two infinities are the
float sentinels ``NEG_INF`` and ``POS_INF``, which compare exactly against
fractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union

from .errors import ArtifactError

NEG_INF = -math.inf
POS_INF = math.inf

Ext = Union[Fraction, float]  # a Fraction, or one of the two infinities
Interval = Tuple[Ext, Ext]

FULL_LINE = "full"
OPEN_INTERVAL = "open"
CLOSED_INTERVAL = "closed"
_KINDS = (FULL_LINE, OPEN_INTERVAL, CLOSED_INTERVAL)


def to_ext(value) -> Ext:
    """Coerce ``value`` to an exact extended rational.

    Accepts ints, Fractions, the strings ``"p/q"``, ``"p"``, ``"inf"`` and
    ``"-inf"``, and the float infinities.  Finite floats are rejected so that
    no rounding can sneak in.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ArtifactError("BAD_RATIONAL", repr(value))
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if value == POS_INF:
            return POS_INF
        if value == NEG_INF:
            return NEG_INF
        raise ArtifactError("BAD_RATIONAL", f"finite floats are not exact: {value!r}")
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "+inf", "infinity", "+infinity"):
            return POS_INF
        if text in ("-inf", "-infinity"):
            return NEG_INF
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ArtifactError("BAD_RATIONAL", repr(value)) from exc
    raise ArtifactError("BAD_RATIONAL", repr(value))


def to_rational(value) -> Fraction:
    x = to_ext(value)
    if not isinstance(x, Fraction):
        raise ArtifactError("BAD_RATIONAL", f"expected a finite rational, got {value!r}")
    return x


def is_finite(x: Ext) -> bool:
    return isinstance(x, Fraction)


def fmt_ext(x: Ext) -> str:
    """Render an extended rational as ``"p/q"``, ``"p"``, ``"inf"`` or ``"-inf"``."""
    if x == POS_INF:
        return "inf"
    if x == NEG_INF:
        return "-inf"
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Ambient:
    kind: str
    a: Ext = NEG_INF
    b: Ext = POS_INF

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ArtifactError("BAD_AMBIENT", f"unknown kind {self.kind!r}")
        object.__setattr__(self, "a", to_ext(self.a))
        object.__setattr__(self, "b", to_ext(self.b))
        if self.kind == FULL_LINE and (self.a != NEG_INF or self.b != POS_INF):
            raise ArtifactError("BAD_AMBIENT", "the full line has infinite ends")
        if not self.a < self.b:
            raise ArtifactError("BAD_AMBIENT", "ambient needs a < b")
        if self.kind == CLOSED_INTERVAL and not (is_finite(self.a) and is_finite(self.b)):
            raise ArtifactError("BAD_AMBIENT", "a closed ambient needs finite ends")

    @property
    def length(self) -> Ext:
        return self.b - self.a

    @property
    def bounded(self) -> bool:
        return is_finite(self.a) and is_finite(self.b)

    @property
    def is_closed(self) -> bool:
        return self.kind == CLOSED_INTERVAL

    def contains_point(self, x: Ext) -> bool:
        if self.is_closed:
            return self.a <= x <= self.b
        return self.a < x < self.b

    def __str__(self) -> str:
        if self.kind == FULL_LINE:
            return "R"
        if self.kind == OPEN_INTERVAL:
            return f"({fmt_ext(self.a)},{fmt_ext(self.b)})"
        return f"[{fmt_ext(self.a)},{fmt_ext(self.b)}]"


REAL_LINE = Ambient(FULL_LINE)


def open_interval(a, b) -> Ambient:
    return Ambient(OPEN_INTERVAL, a, b)


def closed_interval(a, b) -> Ambient:
    return Ambient(CLOSED_INTERVAL, a, b)


def _merge(pieces: Iterable[Interval]) -> Tuple[Interval, ...]:
    """Sort and merge overlapping or touching intervals (int of clos of the union)."""
    out = []
    for lo, hi in sorted(pieces, key=lambda p: p[0]):
        if out and lo <= out[-1][1]:
            if hi > out[-1][1]:
                out[-1][1] = hi
        else:
            out.append([lo, hi])
    return tuple((lo, hi) for lo, hi in out)


@dataclass(frozen=True)
class ElementarySet:
    ambient: Ambient
    intervals: Tuple[Interval, ...] = ()

    def __post_init__(self):
        ivs = tuple((to_ext(lo), to_ext(hi)) for lo, hi in self.intervals)
        a, b = self.ambient.a, self.ambient.b
        prev = None
        for lo, hi in ivs:
            if not lo < hi:
                raise ArtifactError("MALFORMED_INTERVAL", f"({fmt_ext(lo)},{fmt_ext(hi)})")
            if lo < a or hi > b:
                raise ArtifactError("OUT_OF_AMBIENT", f"({fmt_ext(lo)},{fmt_ext(hi)}) not in {self.ambient}")
            if prev is not None and not prev < lo:
                raise ArtifactError("MALFORMED_INTERVAL", "intervals must be sorted with strict gaps")
            prev = hi
        object.__setattr__(self, "intervals", ivs)

    @classmethod
    def _raw(cls, ambient: Ambient, intervals: Tuple[Interval, ...]) -> "ElementarySet":
        # trusted constructor: caller guarantees normal form
        obj = object.__new__(cls)
        object.__setattr__(obj, "ambient", ambient)
        object.__setattr__(obj, "intervals", intervals)
        return obj

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def is_whole(self) -> bool:
        return self.intervals == ((self.ambient.a, self.ambient.b),)

    @property
    def length(self) -> Ext:
        """Lebesgue length (possibly infinite)."""
        return sum((hi - lo for lo, hi in self.intervals), Fraction(0))

    def contains_point(self, x: Ext) -> bool:
        """Pointwise membership, honouring the half-open convention at closed ends."""
        if not self.ambient.contains_point(x):
            return False
        amb = self.ambient
        for lo, hi in self.intervals:
            if lo < x < hi:
                return True
            if amb.is_closed and ((x == lo == amb.a) or (x == hi == amb.b)):
                return True
        return False

    def issubset(self, other: "ElementarySet") -> bool:
        _same_ambient(self, other)
        j = 0
        theirs = other.intervals
        for lo, hi in self.intervals:
            while j < len(theirs) and theirs[j][1] <= lo:
                j += 1
            if j == len(theirs) or not (theirs[j][0] <= lo and hi <= theirs[j][1]):
                return False
        return True

    def __str__(self) -> str:
        if not self.intervals:
            return "{}"
        return " u ".join(_fmt_interval(self.ambient, lo, hi) for lo, hi in self.intervals)


def _fmt_interval(amb: Ambient, lo: Ext, hi: Ext) -> str:
    left = "[" if amb.is_closed and lo == amb.a else "("
    right = "]" if amb.is_closed and hi == amb.b else ")"
    return f"{left}{fmt_ext(lo)},{fmt_ext(hi)}{right}"


def _same_ambient(E: ElementarySet, F: ElementarySet) -> None:
    if E.ambient != F.ambient:
        raise ArtifactError("AMBIENT_MISMATCH", f"{E.ambient} vs {F.ambient}")


def empty(ambient: Ambient) -> ElementarySet:
    return ElementarySet._raw(ambient, ())


def whole(ambient: Ambient) -> ElementarySet:
    return ElementarySet._raw(ambient, ((ambient.a, ambient.b),))


def regularize(raw: Iterable[Sequence], ambient: Ambient) -> ElementarySet:
    """Return int(clos(union of raw)) in normal form."""
    pieces = []
    for lo, hi in raw:
        lo, hi = to_ext(lo), to_ext(hi)
        if not lo < hi:
            raise ArtifactError("MALFORMED_INTERVAL", f"({fmt_ext(lo)},{fmt_ext(hi)})")
        if lo < ambient.a or hi > ambient.b:
            raise ArtifactError("OUT_OF_AMBIENT", f"({fmt_ext(lo)},{fmt_ext(hi)}) not in {ambient}")
        pieces.append((lo, hi))
    return ElementarySet._raw(ambient, _merge(pieces))


def interval_set(ambient: Ambient, lo, hi) -> ElementarySet:
    return regularize([(lo, hi)], ambient)


def meet(E: ElementarySet, F: ElementarySet) -> ElementarySet:
    _same_ambient(E, F)
    out = []
    xs, ys = E.intervals, F.intervals
    i = j = 0
    while i < len(xs) and j < len(ys):
        lo = max(xs[i][0], ys[j][0])
        hi = min(xs[i][1], ys[j][1])
        if lo < hi:
            out.append((lo, hi))
        if xs[i][1] < ys[j][1]:
            i += 1
        else:
            j += 1
    # each piece ends at an endpoint followed by a strict gap, so out is already normal
    return ElementarySet._raw(E.ambient, tuple(out))


def neg(E: ElementarySet) -> ElementarySet:
    """Regular complement int(S \\ E)."""
    amb = E.ambient
    out = []
    cursor = amb.a
    for lo, hi in E.intervals:
        if cursor < lo:
            out.append((cursor, lo))
        cursor = hi
    if cursor < amb.b:
        out.append((cursor, amb.b))
    return ElementarySet._raw(amb, tuple(out))


def join(E: ElementarySet, F: ElementarySet) -> ElementarySet:
    _same_ambient(E, F)
    return ElementarySet._raw(E.ambient, _merge(E.intervals + F.intervals))


def join_all(sets: Iterable[ElementarySet], ambient: Ambient) -> ElementarySet:
    pieces = []
    for E in sets:
        if E.ambient != ambient:
            raise ArtifactError("AMBIENT_MISMATCH", f"{E.ambient} vs {ambient}")
        pieces.extend(E.intervals)
    return ElementarySet._raw(ambient, _merge(pieces))


def difference(E: ElementarySet, F: ElementarySet) -> ElementarySet:
    """E ∩ ¬F."""
    return meet(E, neg(F))


def disjoint(E: ElementarySet, F: ElementarySet) -> bool:
    return meet(E, F).is_empty


def boundary(E: ElementarySet) -> Tuple[Fraction, ...]:
    """Finite endpoints of E that lie in the ambient space but not in E.

    Open-ambient ends are not points of the space.  A closed-ambient end is a
    boundary point only when the set omits it, which in normal form never
    happens: an interval reaching ``a`` already contains ``a``.
    """
    amb = E.ambient
    pts = []
    for lo, hi in E.intervals:
        for x in (lo, hi):
            if is_finite(x) and amb.contains_point(x) and not E.contains_point(x):
                pts.append(x)
    return tuple(sorted(set(pts)))


def extend(E: ElementarySet) -> ElementarySet:
    """Carry a set on (a, b) to int(clos(E)) inside the compact ambient [a, b]."""
    amb = E.ambient
    if amb.kind != OPEN_INTERVAL:
        raise ArtifactError("BAD_AMBIENT", "extend expects an open-interval ambient")
    if not amb.bounded:
        raise ArtifactError("UNBOUNDED_AMBIENT", str(amb))
    return ElementarySet._raw(closed_interval(amb.a, amb.b), E.intervals)


def restrict(E: ElementarySet) -> ElementarySet:
    """Inverse of :func:`extend`: intersect a set on [a, b] with (a, b)."""
    amb = E.ambient
    if amb.kind != CLOSED_INTERVAL:
        raise ArtifactError("BAD_AMBIENT", "restrict expects a closed-interval ambient")
    return ElementarySet._raw(open_interval(amb.a, amb.b), E.intervals)


def validate_partition(target: ElementarySet, cells: Sequence[ElementarySet]) -> None:
    """Raise NOT_A_PARTITION unless cells are nonempty, disjoint and join to target."""
    for c in cells:
        _same_ambient(target, c)
        if c.is_empty:
            raise ArtifactError("NOT_A_PARTITION", "empty cell")
    # pairwise disjoint iff total length of the merged union equals the sum,
    # but lengths can be infinite, so check on sorted pieces instead
    pieces = sorted((iv for c in cells for iv in c.intervals), key=lambda p: p[0])
    for (_, hi), (lo, _) in zip(pieces, pieces[1:]):
        if lo < hi:
            raise ArtifactError("NOT_A_PARTITION", "cells overlap")
    if join_all(cells, target.ambient) != target:
        raise ArtifactError("NOT_A_PARTITION", "cells do not join to the target")


# --- JSON ---------------------------------------------------------------------


def ambient_to_json(amb: Ambient) -> dict:
    if amb.kind == FULL_LINE:
        return {"kind": "full"}
    return {"kind": amb.kind, "a": fmt_ext(amb.a), "b": fmt_ext(amb.b)}


def ambient_from_json(obj) -> Ambient:
    if obj is None:
        return REAL_LINE
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ArtifactError("BAD_AMBIENT", f"expected an ambient object, got {obj!r}")
    kind = obj["kind"]
    if kind == FULL_LINE:
        return REAL_LINE
    if "a" not in obj or "b" not in obj:
        raise ArtifactError("BAD_AMBIENT", "interval ambients need 'a' and 'b'")
    return Ambient(kind, to_ext(obj["a"]), to_ext(obj["b"]))


def set_to_json(E: ElementarySet) -> dict:
    return {
        "ambient": ambient_to_json(E.ambient),
        "intervals": [[fmt_ext(lo), fmt_ext(hi)] for lo, hi in E.intervals],
    }


def set_from_json(obj, default_ambient: Ambient = REAL_LINE) -> ElementarySet:
    """Parse a set; raw intervals are regularized, so touching input is fine."""
    if not isinstance(obj, dict) or "intervals" not in obj:
        raise ArtifactError("BAD_JSON", "a set needs an 'intervals' list")
    amb = ambient_from_json(obj["ambient"]) if "ambient" in obj else default_ambient
    raw = obj["intervals"]
    if not isinstance(raw, list) or any(not isinstance(p, list) or len(p) != 2 for p in raw):
        raise ArtifactError("BAD_JSON", "intervals must be [lo, hi] pairs")
    return regularize(raw, amb)
