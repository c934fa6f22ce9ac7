from fractions import Fraction

from hypothesis import settings, strategies as st

from artifact.elementary_algebra import REAL_LINE, ElementarySet, closed_interval, open_interval

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")

UNIT = open_interval(0, 1)
UNIT_CLOSED = closed_interval(0, 1)
AMBIENTS = [REAL_LINE, UNIT, UNIT_CLOSED, open_interval(-2, 3)]


def F(s):
    return Fraction(s)


def iv(amb, *pairs):
    return ElementarySet(amb, tuple((Fraction(a) if not isinstance(a, float) else a,
                                     Fraction(b) if not isinstance(b, float) else b) for a, b in pairs))


def _window(amb):
    lo = amb.a if amb.a != float("-inf") else Fraction(-10)
    hi = amb.b if amb.b != float("inf") else Fraction(10)
    return lo, hi


@st.composite
def inner_points(draw, amb, max_size=8, max_den=64):
    """Distinct sorted rationals strictly inside the ambient window."""
    lo, hi = _window(amb)
    raw = draw(st.lists(st.tuples(st.integers(2, max_den), st.integers(1, max_den - 1)), max_size=max_size))
    pts = {lo + (hi - lo) * Fraction(min(k, d - 1), d) for d, k in raw}
    return sorted(pts)


@st.composite
def elementary_sets(draw, amb, max_den=64):
    pts = draw(inner_points(amb, max_den=max_den))
    if draw(st.booleans()):
        pts = [amb.a] + pts
    if draw(st.booleans()):
        pts = pts + [amb.b]
    if len(pts) % 2:
        pts = pts[:-1]
    return ElementarySet(amb, tuple((pts[i], pts[i + 1]) for i in range(0, len(pts), 2)))


ambients = st.sampled_from(AMBIENTS)


@st.composite
def set_pairs(draw, n=2):
    amb = draw(ambients)
    return tuple(draw(elementary_sets(amb)) for _ in range(n))
