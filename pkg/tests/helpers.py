"""Shared generators for property tests."""

from fractions import Fraction

import sympy
from hypothesis import strategies as st

from branchfol.forms import KForm
from branchfol.poly import MultiPoly

coeffs = st.fractions(min_value=-7, max_value=7, max_denominator=5)


@st.composite
def polys(draw, nvars=3, max_degree=4, max_terms=6, homogeneous=None):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        if homogeneous is None:
            exps = draw(st.lists(st.integers(0, max_degree), min_size=nvars, max_size=nvars))
            if sum(exps) > max_degree:
                continue
        else:
            cuts = sorted(draw(st.lists(st.integers(0, homogeneous), min_size=nvars - 1, max_size=nvars - 1)))
            bounds = [0] + cuts + [homogeneous]
            exps = [bounds[i + 1] - bounds[i] for i in range(nvars)]
        terms[tuple(exps)] = draw(coeffs)
    return MultiPoly(nvars, terms)


@st.composite
def forms(draw, nvars=3, k=1, max_degree=3):
    from itertools import combinations

    out = {}
    for idx in combinations(range(nvars), k):
        if draw(st.booleans()):
            out[idx] = draw(polys(nvars, max_degree, 4))
    return KForm(nvars, k, out)


def to_sympy(p: MultiPoly, syms):
    expr = sympy.Integer(0)
    for exps, c in p.terms.items():
        term = sympy.Rational(Fraction(c).numerator, Fraction(c).denominator)
        for s, e in zip(syms, exps):
            term *= s**e
        expr += term
    return sympy.expand(expr)
