"""Finitely additive credences on the elementary algebra.

Every rule is a small immutable object with an ``eval`` method.  Point masses
are one-sided germs: ``PointMass(x, RIGHT)`` charges a set exactly when it
contains some ``(x, x + eps)``.  Those two germs are all the ultrafilters of
the elementary algebra that are fixed at ``x``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

from .elementary_algebra import (
    NEG_INF,
    POS_INF,
    Ambient,
    ElementarySet,
    ambient_from_json,
    ambient_to_json,
    fmt_ext,
    is_finite,
    set_from_json,
    to_rational,
    validate_partition,
)
from .errors import ArtifactError

LEFT = "left"
RIGHT = "right"

END_NEG_INF = "neg_inf"
END_POS_INF = "pos_inf"
END_AMBIENT_LEFT = "ambient_left"
END_AMBIENT_RIGHT = "ambient_right"
_ENDS = (END_NEG_INF, END_POS_INF, END_AMBIENT_LEFT, END_AMBIENT_RIGHT)

ZERO = Fraction(0)
ONE = Fraction(1)


class Credence:
    """Base class; subclasses set ``ambient`` and implement ``_eval``."""

    ambient: Ambient
    rule: str = "abstract"

    def eval(self, E: ElementarySet) -> Fraction:
        if E.ambient != self.ambient:
            raise ArtifactError("AMBIENT_MISMATCH", f"set on {E.ambient}, credence on {self.ambient}")
        return self._eval(E)

    def _eval(self, E: ElementarySet) -> Fraction:  # pragma: no cover - abstract
        raise NotImplementedError


def evaluate(mu: Credence, E: ElementarySet) -> Fraction:
    return mu.eval(E)


@dataclass(frozen=True)
class Lebesgue(Credence):
    ambient: Ambient
    rule = "lebesgue"

    def __post_init__(self):
        if not self.ambient.bounded:
            raise ArtifactError("UNNORMALIZABLE", f"Lebesgue measure on {self.ambient} has infinite mass")

    def _eval(self, E):
        return E.length / self.ambient.length


@dataclass(frozen=True)
class PointMass(Credence):
    ambient: Ambient
    x: Fraction
    side: str
    rule = "point_mass"

    def __post_init__(self):
        object.__setattr__(self, "x", to_rational(self.x))
        amb, x = self.ambient, self.x
        if self.side not in (LEFT, RIGHT):
            raise ArtifactError("BAD_CREDENCE", f"side must be left or right, got {self.side!r}")
        if not amb.a <= x <= amb.b:
            raise ArtifactError("BAD_CREDENCE", f"point {fmt_ext(x)} outside {amb}")
        # the germ has to point into the space
        if (self.side == RIGHT and x == amb.b) or (self.side == LEFT and x == amb.a):
            raise ArtifactError("BAD_CREDENCE", f"{self.side} germ at {fmt_ext(x)} leaves {amb}")

    def _eval(self, E):
        x = self.x
        if self.side == RIGHT:
            hit = any(lo <= x < hi for lo, hi in E.intervals)
        else:
            hit = any(lo < x <= hi for lo, hi in E.intervals)
        return ONE if hit else ZERO


@dataclass(frozen=True)
class EndMass(Credence):
    """Germ at an end of the ambient: a free ultrafilter at an infinite end."""

    ambient: Ambient
    end: str
    rule = "end_mass"

    def __post_init__(self):
        amb = self.ambient
        if self.end not in _ENDS:
            raise ArtifactError("BAD_CREDENCE", f"unknown end {self.end!r}")
        ok = {
            END_NEG_INF: amb.a == NEG_INF,
            END_POS_INF: amb.b == POS_INF,
            END_AMBIENT_LEFT: is_finite(amb.a),
            END_AMBIENT_RIGHT: is_finite(amb.b),
        }[self.end]
        if not ok:
            raise ArtifactError("BAD_CREDENCE", f"{self.end} is not an end of {amb}")

    def _eval(self, E):
        if not E.intervals:
            return ZERO
        if self.end in (END_NEG_INF, END_AMBIENT_LEFT):
            return ONE if E.intervals[0][0] == self.ambient.a else ZERO
        return ONE if E.intervals[-1][1] == self.ambient.b else ZERO


@dataclass(frozen=True)
class AtomTable(Credence):
    """Weights on the atoms of a finite algebra (see :mod:`artifact.stone_rep`)."""

    algebra: object
    weights: Tuple[Fraction, ...]
    rule = "atom_table"

    def __post_init__(self):
        ws = tuple(to_rational(w) for w in self.weights)
        object.__setattr__(self, "weights", ws)
        if len(ws) != len(self.algebra.atoms):
            raise ArtifactError("BAD_CREDENCE", "one weight per atom is required")
        if any(w < 0 for w in ws) or sum(ws) != 1:
            raise ArtifactError("BAD_CREDENCE", "atom weights must be nonnegative and sum to 1")

    @property
    def ambient(self) -> Ambient:
        return self.algebra.ambient

    def _eval(self, E):
        mask = self.algebra.mask_of(E)
        return sum((w for i, w in enumerate(self.weights) if mask >> i & 1), ZERO)


@dataclass(frozen=True)
class Mixture(Credence):
    parts: Tuple[Tuple[Fraction, Credence], ...]
    rule = "mixture"

    def __post_init__(self):
        parts = tuple((to_rational(w), mu) for w, mu in self.parts)
        object.__setattr__(self, "parts", parts)
        if not parts:
            raise ArtifactError("BAD_CREDENCE", "empty mixture")
        if any(w <= 0 for w, _ in parts) or sum(w for w, _ in parts) != 1:
            raise ArtifactError("BAD_CREDENCE", "mixture weights must be positive and sum to 1")
        amb = parts[0][1].ambient
        if any(mu.ambient != amb for _, mu in parts):
            raise ArtifactError("AMBIENT_MISMATCH", "mixture parts live on different ambients")

    @property
    def ambient(self) -> Ambient:
        return self.parts[0][1].ambient

    def _eval(self, E):
        return sum((w * mu._eval(E) for w, mu in self.parts), ZERO)


def mixture(*parts) -> Credence:
    """``mixture((w1, mu1), (w2, mu2), ...)``; a single full-weight part is returned as is."""
    if len(parts) == 1 and to_rational(parts[0][0]) == 1:
        return parts[0][1]
    return Mixture(tuple(parts))


def check_additivity(mu: Credence, target: ElementarySet, cells: Sequence[ElementarySet]) -> bool:
    """Exact check of mu[join cells] = sum mu[cell] for a partition of target."""
    validate_partition(target, cells)
    return mu.eval(target) == sum((mu.eval(c) for c in cells), ZERO)


def extend_to_refinement(mu: AtomTable, finer) -> AtomTable:
    """Push an atom table down to a finer algebra.

    Inside each coarse atom the mass is split in proportion to Lebesgue length
    of the finer atoms.  When those lengths do not give a finite positive
    total (unbounded atoms) the split is uniform.
    """
    coarse = mu.algebra
    if finer.ambient != coarse.ambient:
        raise ArtifactError("AMBIENT_MISMATCH", "algebras live on different ambients")
    owner = [None] * len(finer.atoms)
    for ci, catom in enumerate(coarse.atoms):
        try:
            mask = finer.mask_of(catom)
        except ArtifactError as exc:
            raise ArtifactError("NOT_A_REFINEMENT", f"coarse atom {catom} is not a join of finer atoms") from exc
        for fi in range(len(finer.atoms)):
            if mask >> fi & 1:
                owner[fi] = ci
    if any(o is None for o in owner):
        raise ArtifactError("NOT_A_REFINEMENT", "finer atoms not covered by coarse atoms")
    weights = [ZERO] * len(finer.atoms)
    for ci, w in enumerate(mu.weights):
        kids = [fi for fi, o in enumerate(owner) if o == ci]
        lengths = [finer.atoms[fi].length for fi in kids]
        total = sum(lengths, ZERO)
        if is_finite(total) and total > 0:
            for fi, length in zip(kids, lengths):
                weights[fi] = w * length / total
        else:
            for fi in kids:
                weights[fi] = w / len(kids)
    return AtomTable(finer, tuple(weights))


# --- JSON ---------------------------------------------------------------------


def credence_to_json(mu: Credence, with_ambient: bool = True) -> dict:
    out: dict = {"rule": mu.rule}
    if isinstance(mu, PointMass):
        out.update(x=fmt_ext(mu.x), side=mu.side)
    elif isinstance(mu, EndMass):
        out["end"] = mu.end
    elif isinstance(mu, AtomTable):
        from .elementary_algebra import set_to_json

        out["generators"] = [set_to_json(g)["intervals"] for g in mu.algebra.generators]
        out["weights"] = [fmt_ext(w) for w in mu.weights]
    elif isinstance(mu, Mixture):
        out["parts"] = [{"w": fmt_ext(w), "of": credence_to_json(p, with_ambient=False)} for w, p in mu.parts]
    elif hasattr(mu, "to_json"):
        out.update(mu.to_json())
    if with_ambient:
        out["ambient"] = ambient_to_json(mu.ambient)
    return out


def credence_from_json(obj, default_ambient: Ambient = None) -> Credence:
    from .elementary_algebra import REAL_LINE

    if not isinstance(obj, dict) or "rule" not in obj:
        raise ArtifactError("BAD_CREDENCE", "a credence needs a 'rule'")
    amb = ambient_from_json(obj["ambient"]) if "ambient" in obj else (default_ambient or REAL_LINE)
    rule = obj["rule"]
    try:
        if rule == "lebesgue":
            return Lebesgue(amb)
        if rule == "point_mass":
            return PointMass(amb, to_rational(obj["x"]), obj.get("side", RIGHT))
        if rule == "end_mass":
            return EndMass(amb, obj["end"])
        if rule == "atom_table":
            from .stone_rep import generate

            gens = [set_from_json({"intervals": g}, amb) for g in obj["generators"]]
            return AtomTable(generate(gens, amb), tuple(to_rational(w) for w in obj["weights"]))
        if rule == "mixture":
            parts = [(to_rational(p["w"]), credence_from_json(p["of"], amb)) for p in obj["parts"]]
            return Mixture(tuple(parts))
    except KeyError as exc:
        raise ArtifactError("BAD_CREDENCE", f"missing field {exc} for rule {rule!r}") from exc
    raise ArtifactError("BAD_CREDENCE", f"unknown rule {rule!r}")
