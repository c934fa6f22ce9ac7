"""Finite subalgebras, their Stone spaces, and the atom-sum form of the integral.

A finite Boolean algebra is determined by its atoms, so elements are stored as
bitmasks over the atom list.  The Stone space of such an algebra has one point
per atom (each atom generates a principal ultrafilter and there are no others),
and the clopen set ``B*`` is the set of atoms below ``B``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, List, Sequence, Tuple

from .elementary_algebra import (
    Ambient,
    ElementarySet,
    interval_set,
    join_all,
    meet,
    neg,
    whole,
)
from .errors import ArtifactError

DEFAULT_CAP = 2 ** 16


class FiniteAlgebra:
    """The Boolean subalgebra generated by finitely many elementary sets."""

    def __init__(self, ambient: Ambient, generators: Sequence[ElementarySet], atoms: Sequence[ElementarySet]):
        self.ambient = ambient
        self.generators = tuple(generators)
        # deterministic order: by first left endpoint
        self.atoms: Tuple[ElementarySet, ...] = tuple(sorted(atoms, key=lambda A: A.intervals[0][0]))
        self._index = {A: i for i, A in enumerate(self.atoms)}

    def __len__(self) -> int:
        return 1 << len(self.atoms)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.atoms)) - 1

    def element(self, mask: int) -> ElementarySet:
        return join_all((A for i, A in enumerate(self.atoms) if mask >> i & 1), self.ambient)

    def elements(self):
        """All elements, indexed by atom bitmask (2 ** #atoms of them)."""
        for mask in range(1 << len(self.atoms)):
            yield self.element(mask)

    def mask_of(self, E: ElementarySet) -> int:
        """Bitmask of the atoms below E; NOT_IN_ALGEBRA if E is not their join."""
        if E.ambient != self.ambient:
            raise ArtifactError("AMBIENT_MISMATCH", f"{E.ambient} vs {self.ambient}")
        mask = 0
        for i, A in enumerate(self.atoms):
            if A.issubset(E):
                mask |= 1 << i
        if self.element(mask) != E:
            raise ArtifactError("NOT_IN_ALGEBRA", str(E))
        return mask

    def contains(self, E: ElementarySet) -> bool:
        try:
            self.mask_of(E)
        except ArtifactError:
            return False
        return True

    def refines(self, coarser: "FiniteAlgebra") -> bool:
        return all(self.contains(A) for A in coarser.atoms)

    def verify_closure(self) -> bool:
        """Exhaustively confirm that the element list is closed under the operations."""
        elems = {self.element(m): m for m in range(1 << len(self.atoms))}
        for E, m in elems.items():
            if elems.get(neg(E)) != self.full_mask ^ m:
                return False
            for F, k in elems.items():
                if elems.get(meet(E, F)) != m & k:
                    return False
                if elems.get(join_all((E, F), self.ambient)) != m | k:
                    return False
        return True


def generate(generators: Sequence[ElementarySet], ambient: Ambient, cap: int = DEFAULT_CAP) -> FiniteAlgebra:
    """Smallest subalgebra containing the generators.

    Atoms are the nonempty cells ``A ∧ G`` / ``A ∧ ¬G`` obtained by splitting
    against each generator in turn.
    """
    atoms: List[ElementarySet] = [whole(ambient)]
    for G in generators:
        if G.ambient != ambient:
            raise ArtifactError("AMBIENT_MISMATCH", f"generator on {G.ambient}, ambient {ambient}")
        notG = neg(G)
        nxt = []
        for A in atoms:
            for piece in (meet(A, G), meet(A, notG)):
                if not piece.is_empty:
                    nxt.append(piece)
        atoms = nxt
        if (1 << len(atoms)) > cap:
            raise ArtifactError("CLOSURE_TOO_LARGE", f"{1 << len(atoms)} elements exceed the cap {cap}")
    return FiniteAlgebra(ambient, generators, atoms)


def dyadic_algebra(ambient: Ambient, depth: int) -> FiniteAlgebra:
    """Algebra generated by the 2**depth equal subintervals of a bounded ambient."""
    if not ambient.bounded:
        raise ArtifactError("UNBOUNDED_AMBIENT", str(ambient))
    a, b = ambient.a, ambient.b
    n = 1 << depth
    cuts = [a + (b - a) * Fraction(k, n) for k in range(n + 1)]
    gens = [interval_set(ambient, cuts[k], cuts[k + 1]) for k in range(n)]
    if (1 << n) > DEFAULT_CAP:
        # the atoms are the generators themselves; skip the closure cap
        return FiniteAlgebra(ambient, gens, gens)
    return generate(gens, ambient)


@dataclass(frozen=True)
class StoneSpace:
    algebra: FiniteAlgebra

    @property
    def points(self) -> Tuple[int, ...]:
        return tuple(range(len(self.algebra.atoms)))

    def clopen(self, E: ElementarySet) -> FrozenSet[int]:
        mask = self.algebra.mask_of(E)
        return frozenset(i for i in self.points if mask >> i & 1)

    def ultrafilter(self, point: int) -> List[ElementarySet]:
        """The principal ultrafilter of elements containing the given atom."""
        return [self.algebra.element(m) for m in range(len(self.algebra)) if m >> point & 1]

    def verify_isomorphism(self) -> bool:
        """B -> B* sends join, meet and neg to union, intersection and complement."""
        alg = self.algebra
        elems = [alg.element(m) for m in range(len(alg))]
        stars = [self.clopen(E) for E in elems]
        everything = frozenset(self.points)
        if len(set(stars)) != len(elems):
            return False
        for E, Es in zip(elems, stars):
            if self.clopen(neg(E)) != everything - Es:
                return False
            for F, Fs in zip(elems, stars):
                if self.clopen(join_all((E, F), alg.ambient)) != Es | Fs:
                    return False
                if self.clopen(meet(E, F)) != Es & Fs:
                    return False
        return True


def stone_space(alg: FiniteAlgebra) -> StoneSpace:
    return StoneSpace(alg)


def star_measure(mu, alg: FiniteAlgebra) -> Tuple[Fraction, ...]:
    """Weight of each Stone point: mu*[{a}] = mu[a]."""
    return tuple(mu.eval(A) for A in alg.atoms)


def _atom_values(f, alg: FiniteAlgebra) -> List[Fraction]:
    values: List = [None] * len(alg.atoms)
    for cell, v in zip(f.partition.cells, f.values):
        try:
            mask = alg.mask_of(cell)
        except ArtifactError as exc:
            raise ArtifactError("NOT_SUBORDINATE", f"cell {cell} is not in the algebra") from exc
        for i in range(len(alg.atoms)):
            if mask >> i & 1:
                values[i] = v
    return values


def star_integral(f, mu, D: ElementarySet, alg: FiniteAlgebra) -> Fraction:
    """Integral of f* over D* against mu*: a finite atom sum."""
    values = _atom_values(f, alg)
    weights = star_measure(mu, alg)
    mask = alg.mask_of(D)
    return sum((values[i] * weights[i] for i in range(len(alg.atoms)) if mask >> i & 1), Fraction(0))


def algebra_minorant(g, alg: FiniteAlgebra):
    """Best simple minorant of g subordinate to alg: the infimum of g on each atom."""
    from .integrator import BPartition, SimpleFunction

    values = tuple(g.inf_on(A) for A in alg.atoms)
    return SimpleFunction(BPartition(whole(alg.ambient), alg.atoms), values)


@dataclass(frozen=True)
class RefiningResult:
    value: Fraction
    history: Tuple[Fraction, ...]
    target: Fraction
    converged: bool


def refining_sequence(g, mu, algebras: Sequence[FiniteAlgebra], eps, D: ElementarySet = None) -> RefiningResult:
    """Star integrals of the atomwise minorants along a refining chain.

    Stops as soon as a value is within eps * mu[D] of the exact integral.
    """
    from .integrator import integrate_exact

    eps = Fraction(eps)
    if not algebras:
        raise ArtifactError("NO_CONVERGENCE", "no algebras supplied")
    amb = algebras[0].ambient
    D = whole(amb) if D is None else D
    target = integrate_exact(g, mu, D)
    slack = eps * mu.eval(D)
    history = []
    prev = None
    for alg in algebras:
        if prev is not None and not alg.refines(prev):
            raise ArtifactError("NOT_A_REFINEMENT", "algebra sequence is not refining")
        f = algebra_minorant(g, alg)
        history.append(star_integral(f, mu, D, alg))
        if target - history[-1] <= slack:
            return RefiningResult(history[-1], tuple(history), target, True)
        prev = alg
    return RefiningResult(history[-1], tuple(history), target, False)


def refining_limit(g, mu, algebras: Sequence[FiniteAlgebra], eps, D: ElementarySet = None) -> Fraction:
    res = refining_sequence(g, mu, algebras, eps, D)
    if not res.converged:
        raise ArtifactError(
            "NO_CONVERGENCE",
            f"last value {res.value} is {res.target - res.value} below the exact integral",
        )
    return res.value
