"""Hypothesis strategies shared by the property suites."""

from fractions import Fraction

from hypothesis import strategies as st

from merobound.arith.gaussian import GaussianRational
from merobound.arith.poly import SparsePoly

small_ints = st.integers(min_value=-4, max_value=4)
rationals = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


@st.composite
def gaussians(draw, real=False):
    re = draw(rationals)
    im = Fraction(0) if real else draw(rationals)
    return GaussianRational(re, im)


@st.composite
def polys(draw, vars=("x", "y"), max_terms=5, max_deg=4, real=False, min_terms=0):
    n = draw(st.integers(min_terms, max_terms))
    terms = {}
    for _ in range(n):
        e = tuple(draw(st.integers(0, max_deg)) for _ in vars)
        terms[e] = draw(gaussians(real=real))
    return SparsePoly(terms, vars)


@st.composite
def nonzero_polys(draw, **kw):
    p = draw(polys(min_terms=1, **kw))
    if p.is_zero():
        return SparsePoly.const(1, kw.get("vars", ("x", "y")))
    return p
