"""Hypothesis strategies shared by the test modules."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from classical_skein.groups import Word
from classical_skein.polyring import Poly, PolyRing

coefficients = st.one_of(
    st.integers(-5, 5),
    st.fractions(min_value=-3, max_value=3, max_denominator=4),
)


def polys(ring: PolyRing, max_terms: int = 5, max_exp: int = 2):
    """Random polynomials over the ring's variables with small exponents."""
    mono = st.lists(st.integers(0, max_exp), min_size=ring.nvars, max_size=ring.nvars)

    def build(items):
        terms = {}
        for exps, c in items:
            m = ring.pack({v: e for v, e in enumerate(exps) if e})
            terms[m] = terms.get(m, 0) + Fraction(c)
        return Poly(ring, terms)

    return st.lists(st.tuples(mono, coefficients), max_size=max_terms).map(build)


def words(m: int, max_len: int = 4):
    letters = st.tuples(st.integers(1, m), st.sampled_from((1, -1)))
    return st.lists(letters, max_size=max_len).map(lambda ls: Word(tuple(ls)))
