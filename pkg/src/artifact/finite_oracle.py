"""Brute-force checks on explicitly enumerated finite topological spaces.

Subsets of an ``n``-point space are bitmasks.  Every finite space is a Baire
space, and in a finite space a countable union of nowhere dense sets is a
finite one, hence itself nowhere dense; so the meager sets are exactly the
nowhere dense sets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterator, List, Sequence, Tuple

from .errors import ArtifactError

MAX_POINTS = 4
ZERO = Fraction(0)


@dataclass(frozen=True)
class FiniteSpace:
    n: int
    opens: FrozenSet[int]

    def __post_init__(self):
        full = (1 << self.n) - 1
        ops = self.opens
        if 0 not in ops or full not in ops:
            raise ArtifactError("BAD_JSON", "a topology contains the empty set and the whole space")
        for u in ops:
            if u & ~full:
                raise ArtifactError("BAD_JSON", "open set outside the space")
            for v in ops:
                if u | v not in ops or u & v not in ops:
                    raise ArtifactError("BAD_JSON", "opens are not closed under union and intersection")

    @property
    def full(self) -> int:
        return (1 << self.n) - 1


def discrete(n: int) -> FiniteSpace:
    return FiniteSpace(n, frozenset(range(1 << n)))


def interior(space: FiniteSpace, A: int) -> int:
    out = 0
    for u in space.opens:
        if u & ~A == 0:
            out |= u
    return out


def closure(space: FiniteSpace, A: int) -> int:
    return space.full & ~interior(space, space.full & ~A)


def is_regular(space: FiniteSpace, A: int) -> bool:
    return A in space.opens and interior(space, closure(space, A)) == A


def regular_opens(space: FiniteSpace) -> List[int]:
    return sorted(u for u in space.opens if is_regular(space, u))


@dataclass
class RegularAlgebra:
    space: FiniteSpace
    elements: List[int]

    def join(self, A: int, B: int) -> int:
        return interior(self.space, closure(self.space, A | B))

    def meet(self, A: int, B: int) -> int:
        return A & B

    def neg(self, A: int) -> int:
        return interior(self.space, self.space.full & ~A)

    @property
    def atoms(self) -> List[int]:
        nonzero = [e for e in self.elements if e]
        return [a for a in nonzero if not any(b != a and b & ~a == 0 for b in nonzero)]

    def verify_axioms(self) -> bool:
        E, top = self.elements, self.space.full
        els = set(E)
        j, m, n = self.join, self.meet, self.neg
        for a in E:
            if n(a) not in els or n(n(a)) != a:
                return False
            if j(a, n(a)) != top or m(a, n(a)) != 0 or j(a, 0) != a or m(a, top) != a:
                return False
            for b in E:
                if j(a, b) not in els or m(a, b) not in els:
                    return False
                if j(a, b) != j(b, a) or m(a, b) != m(b, a):
                    return False
                if j(a, m(a, b)) != a or m(a, j(a, b)) != a:
                    return False
                if n(j(a, b)) != m(n(a), n(b)):
                    return False
                for c in E:
                    if j(a, j(b, c)) != j(j(a, b), c) or m(a, m(b, c)) != m(m(a, b), c):
                        return False
                    if m(a, j(b, c)) != j(m(a, b), m(a, c)):
                        return False
                    if j(a, m(b, c)) != m(j(a, b), j(a, c)):
                        return False
        return True


def regular_algebra(space: FiniteSpace) -> RegularAlgebra:
    return RegularAlgebra(space, regular_opens(space))


# --- enumeration ---------------------------------------------------------------


def _closed_family(n: int, ops: set) -> bool:
    for u in ops:
        for v in ops:
            if u | v not in ops or u & v not in ops:
                return False
    return True


def _topologies_by_families(n: int) -> Iterator[FrozenSet[int]]:
    """All families of proper nonempty subsets, in bitmask order, that close up to a topology."""
    full = (1 << n) - 1
    middle = list(range(1, full))
    for choice in range(1 << len(middle)):
        ops = {0, full}
        ops.update(m for i, m in enumerate(middle) if choice >> i & 1)
        if _closed_family(n, ops):
            yield frozenset(ops)


def _topologies_by_preorders(n: int) -> Iterator[FrozenSet[int]]:
    """Topologies as the up-set families of preorders (the specialization order)."""
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    seen = set()
    for choice in range(1 << len(pairs)):
        rel = {(i, i) for i in range(n)}
        rel.update(p for k, p in enumerate(pairs) if choice >> k & 1)
        if any((i, k) not in rel for (i, j) in rel for (j2, k) in rel if j == j2):
            continue
        ops = frozenset(
            A for A in range(1 << n)
            if all(not (A >> i & 1) or (A >> j & 1) for (i, j) in rel)
        )
        if ops not in seen:
            seen.add(ops)
            yield ops


def enumerate_topologies(n: int, cap: int = MAX_POINTS, method: str = "families") -> Iterator[FiniteSpace]:
    """Every labeled topology on n points, in a deterministic order."""
    if n > cap:
        raise ArtifactError("CAP_EXCEEDED", f"{n} points exceed the cap {cap}")
    if n < 0:
        raise ArtifactError("CAP_EXCEEDED", "negative point count")
    gen = _topologies_by_families if method == "families" else _topologies_by_preorders
    for ops in gen(n):
        yield FiniteSpace(n, ops)


def cross_checked_topologies(n: int, cap: int = MAX_POINTS) -> List[FiniteSpace]:
    """Enumerate twice by unrelated methods and insist on the same family of topologies."""
    first = [s.opens for s in enumerate_topologies(n, cap, "families")]
    second = [s.opens for s in enumerate_topologies(n, cap, "preorders")]
    if len(first) != len(set(first)) or set(first) != set(second) or len(first) != len(second):
        raise ArtifactError("ORACLE_MISMATCH", f"enumerations disagree on {n} points")
    return [FiniteSpace(n, ops) for ops in first]


# --- Baire machinery -----------------------------------------------------------


def nowhere_dense(space: FiniteSpace) -> List[int]:
    return [A for A in range(1 << space.n) if interior(space, closure(space, A)) == 0]


def meager_sets(space: FiniteSpace) -> List[int]:
    """Finite unions of nowhere dense sets (which here are again nowhere dense)."""
    nd = nowhere_dense(space)
    out = set(nd)
    for A in nd:
        for B in nd:
            out.add(A | B)
    return sorted(out)


def baire_sets(space: FiniteSpace) -> List[int]:
    meager = meager_sets(space)
    return sorted({O ^ M for O in space.opens for M in meager})


def set_algebra_atoms(family: Sequence[int]) -> List[int]:
    nonzero = [A for A in family if A]
    return [a for a in nonzero if not any(b != a and b & ~a == 0 for b in nonzero)]


@dataclass
class BaireReport:
    classes_ok: bool
    algebra_ok: bool
    roundtrip_ok: bool
    n_classes: int
    witnesses: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.classes_ok and self.algebra_ok and self.roundtrip_ok


def representative(space: FiniteSpace, A: int, meager: FrozenSet[int], regular: Sequence[int]) -> int:
    reps = [R for R in regular if (A ^ R) in meager]
    if len(reps) != 1:
        raise ArtifactError("ORACLE_MISMATCH", f"set {A:b} has {len(reps)} regular representatives")
    return reps[0]


def credence_to_charge(space, weights: Dict[int, Fraction], baire, meager, regular) -> Dict[int, Fraction]:
    """Residual charge ν(A) := μ[R_A] for the regular representative R_A of A."""
    ralg = RegularAlgebra(space, list(regular))
    atoms = ralg.atoms

    def mu(R):
        return sum((weights[a] for a in atoms if a & ~R == 0), ZERO)

    return {A: mu(representative(space, A, meager, regular)) for A in baire}


def is_residual_charge(charge: Dict[int, Fraction], space: FiniteSpace, meager) -> bool:
    if charge.get(space.full) != 1:
        return False
    for A, vA in charge.items():
        if vA < 0:
            return False
        if A in meager and vA != 0:
            return False
        for B, vB in charge.items():
            if A & B == 0 and charge.get(A | B) != vA + vB:
                return False
    return True


def baire_bijection_check(space: FiniteSpace) -> BaireReport:
    """Regular opens versus Baire-property sets modulo meager sets."""
    meager = frozenset(meager_sets(space))
    baire = baire_sets(space)
    baire_set = set(baire)
    regular = regular_opens(space)
    witnesses = []

    algebra_ok = all(space.full & ~A in baire_set for A in baire) and all(
        A | B in baire_set for A in baire for B in baire
    )
    if not algebra_ok:
        witnesses.append("Baire-property sets are not a set algebra")

    classes: Dict[int, List[int]] = {}
    for A in baire:
        key = min(B for B in baire if (A ^ B) in meager)
        classes.setdefault(key, []).append(A)
    classes_ok = True
    for members in classes.values():
        reps = [R for R in regular if R in members]
        if len(reps) != 1:
            classes_ok = False
            witnesses.append(f"class {sorted(members)} has {len(reps)} regular representatives")

    ralg = RegularAlgebra(space, regular)
    r_atoms = ralg.atoms
    b_atoms = set_algebra_atoms(baire)
    live_atoms = [a for a in b_atoms if a not in meager]
    roundtrip_ok = len(live_atoms) == len(r_atoms)
    if not roundtrip_ok:
        witnesses.append("extreme residual charges and regular atoms differ in number")

    # vertex credences plus one strictly mixed credence
    vertices = [{a: Fraction(int(a == v)) for a in r_atoms} for v in r_atoms]
    k = len(r_atoms)
    mixed = {a: Fraction(i + 1, k * (k + 1) // 2) for i, a in enumerate(r_atoms)}
    for weights in vertices + [mixed]:
        charge = credence_to_charge(space, weights, baire, meager, regular)
        if not is_residual_charge(charge, space, meager):
            roundtrip_ok = False
            witnesses.append("image of a credence is not a residual charge")
            continue
        back = {a: charge[a] for a in r_atoms}
        if back != weights:
            roundtrip_ok = False
            witnesses.append("credence -> charge -> credence is not the identity")
        # credence additivity for the join, read back through the charge
        for R in regular:
            for Q in regular:
                if R & Q == 0 and charge[ralg.join(R, Q)] != charge[R] + charge[Q]:
                    roundtrip_ok = False
                    witnesses.append("charge restricted to regular opens is not join-additive")

    # the other direction: each extreme residual charge restricts to a credence and comes back
    for alpha in live_atoms:
        charge = {A: Fraction(int(alpha & ~A == 0)) for A in baire}
        if not is_residual_charge(charge, space, meager):
            roundtrip_ok = False
            witnesses.append("vertex charge is not residual")
            continue
        weights = {a: charge[a] for a in r_atoms}
        if credence_to_charge(space, weights, baire, meager, regular) != charge:
            roundtrip_ok = False
            witnesses.append("charge -> credence -> charge is not the identity")

    return BaireReport(classes_ok, algebra_ok, roundtrip_ok, len(classes), witnesses)


def baire_integral_check(
    space: FiniteSpace,
    weights: Dict[int, Fraction],
    cells: Sequence[int],
    values: Sequence[Fraction],
    B: int,
    junk: Fraction = Fraction(7),
) -> bool:
    """Simple-function integral against μ versus the Lebesgue sum against the residual charge.

    ``cells`` is a regular-open partition of the space.  The pointwise function
    takes ``junk`` on the (meager) points outside every cell, which must not
    matter.
    """
    regular = regular_opens(space)
    ralg = RegularAlgebra(space, regular)
    meager = frozenset(meager_sets(space))
    baire = baire_sets(space)
    atoms = ralg.atoms

    def mu(R):
        return sum((weights[a] for a in atoms if a & ~R == 0), ZERO)

    diamond = sum((v * mu(ralg.meet(P, B)) for P, v in zip(cells, values)), ZERO)

    charge = credence_to_charge(space, weights, baire, meager, regular)
    pointwise = {}
    for p in range(space.n):
        pointwise[p] = junk
        for P, v in zip(cells, values):
            if P >> p & 1:
                pointwise[p] = v
    lebesgue = ZERO
    for v in sorted(set(pointwise.values())):
        level = sum(1 << p for p, w in pointwise.items() if w == v) & B
        lebesgue += v * charge[level]
    return diamond == lebesgue


def regular_partitions(space: FiniteSpace, limit: int = 64) -> List[List[int]]:
    """Some regular-open partitions: groupings of the regular atoms into cells."""
    ralg = regular_algebra(space)
    atoms = ralg.atoms
    out = []
    for labels in itertools.product(range(len(atoms)), repeat=len(atoms)):
        groups: Dict[int, int] = {}
        for a, lab in zip(atoms, labels):
            groups[lab] = ralg.join(groups.get(lab, 0), a)
        cells = sorted(groups.values())
        if cells not in out:
            out.append(cells)
        if len(out) >= limit:
            break
    return out


# --- Stone duality on finite spaces -------------------------------------------


def stone_check(space: FiniteSpace) -> bool:
    """B ↦ B* is an isomorphism of ℜ(S) onto the power set of its atoms.

    For a discrete space the atoms are the singletons and B* is B itself, so
    the Stone space of ℜ(S) is S.
    """
    ralg = regular_algebra(space)
    atoms = ralg.atoms

    def star(B):
        return frozenset(i for i, a in enumerate(atoms) if a & ~B == 0)

    every = frozenset(range(len(atoms)))
    stars = {B: star(B) for B in ralg.elements}
    if len(set(stars.values())) != len(ralg.elements) or len(ralg.elements) != 1 << len(atoms):
        return False
    for A in ralg.elements:
        if star(ralg.neg(A)) != every - stars[A]:
            return False
        for B in ralg.elements:
            if star(ralg.join(A, B)) != stars[A] | stars[B] or star(A & B) != stars[A] & stars[B]:
                return False
    if len(space.opens) == 1 << space.n:
        singletons = sorted(1 << p for p in range(space.n))
        if sorted(atoms) != singletons:
            return False
        if any(sum(1 << atoms[i].bit_length() - 1 for i in stars[B]) != B for B in ralg.elements):
            return False
    return True


# --- driver --------------------------------------------------------------------

CHECKS = ("algebra", "baire", "integral", "stone")


@dataclass
class OracleRow:
    n: int
    spaces: int
    passed: Dict[str, int]
    failures: List[dict]


def _integral_cases(space: FiniteSpace):
    ralg = regular_algebra(space)
    atoms = ralg.atoms
    k = len(atoms)
    weight_sets = [{a: Fraction(int(a == v)) for a in atoms} for v in atoms]
    weight_sets.append({a: Fraction(i + 1, k * (k + 1) // 2) for i, a in enumerate(atoms)})
    for cells in regular_partitions(space, limit=16):
        values = [Fraction(i * 3 - 2, 2) for i in range(len(cells))]
        for B in ralg.elements:
            for w in weight_sets:
                yield w, cells, values, B


def run_oracle(max_points: int = MAX_POINTS, checks: Sequence[str] = CHECKS) -> List[OracleRow]:
    for c in checks:
        if c not in CHECKS:
            raise ArtifactError("BAD_JSON", f"unknown check {c!r}; choose from {', '.join(CHECKS)}")
    if max_points > MAX_POINTS:
        raise ArtifactError("CAP_EXCEEDED", f"{max_points} points exceed the cap {MAX_POINTS}")
    rows = []
    for n in range(1, max_points + 1):
        spaces = cross_checked_topologies(n)
        passed = {c: 0 for c in checks}
        failures = []
        for sp in spaces:
            opens = sorted(sp.opens)
            if "algebra" in checks:
                if regular_algebra(sp).verify_axioms():
                    passed["algebra"] += 1
                else:
                    failures.append({"n": n, "opens": opens, "check": "algebra"})
            if "baire" in checks:
                rep = baire_bijection_check(sp)
                if rep.ok:
                    passed["baire"] += 1
                else:
                    failures.append({"n": n, "opens": opens, "check": "baire", "why": rep.witnesses})
            if "integral" in checks:
                if all(baire_integral_check(sp, w, cells, vals, B) for w, cells, vals, B in _integral_cases(sp)):
                    passed["integral"] += 1
                else:
                    failures.append({"n": n, "opens": opens, "check": "integral"})
            if "stone" in checks:
                if stone_check(sp):
                    passed["stone"] += 1
                else:
                    failures.append({"n": n, "opens": opens, "check": "stone"})
        rows.append(OracleRow(n, len(spaces), passed, failures))
    return rows
