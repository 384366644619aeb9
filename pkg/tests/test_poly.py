import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from branchfol.errors import ArityError
from branchfol.poly import KRONECKER_MIN_WORK, MultiPoly, _packed_mul, grevlex_key, random_homogeneous

from helpers import polys, to_sympy

x0, x1, x2 = MultiPoly.variables(3)
SYMS = sympy.symbols("x0:4")


def test_add_examples():
    assert (x0 + x1) + (-x0) == x1
    assert MultiPoly.zero(3) + x2 == x2
    assert Fraction(1, 2) * x0**2 + Fraction(1, 3) * x0**2 == Fraction(5, 6) * x0**2


def test_mul_examples():
    assert (x0 * x1).terms == {(1, 1, 0): 1}
    assert (x0 * MultiPoly.zero(3)).is_zero()
    assert (x0 + x1) * (x0 - x1) == x0**2 - x1**2


def test_partial_examples():
    assert (x0**3).partial(0) == 3 * x0**2
    assert (x0**3).partial(1).is_zero()
    assert (x0**2 * x1 + x1**2).partial(0) == 2 * x0 * x1
    with pytest.raises(IndexError):
        x0.partial(5)


def test_compose_examples():
    X, Y, Z = x0, x1, x2
    z = MultiPoly.variables(3)
    assert (X * Y).compose([z[0] ** 2, z[1] ** 2, z[2]]) == z[0] ** 2 * z[1] ** 2
    p, q, r = x1 + 1, x2**2, x0
    assert X.compose([p, q, r]) == p
    assert MultiPoly.constant(4, 3).compose([p, q, r]) == MultiPoly.constant(4, 3)
    with pytest.raises(ArityError):
        X.compose([p, q])


def test_evaluate_examples():
    a, b = MultiPoly.variables(2)
    assert (a**2 + b).evaluate([2, 3]) == 7
    assert (a * b + b**3).evaluate([0, 0]) == 0
    h = a**3 - 2 * a * b**2
    assert h.evaluate([3 * 2, 3 * 5]) == 3**3 * h.evaluate([2, 5])
    with pytest.raises(ArityError):
        h.evaluate([1])


def test_arity_mismatch():
    with pytest.raises(ArityError):
        x0 + MultiPoly.variable(0, 2)


def test_grevlex_order():
    # x0 > x1 > x2 in degree 1; x1^2 > x0*x2 in grevlex
    assert grevlex_key((1, 0, 0)) > grevlex_key((0, 1, 0)) > grevlex_key((0, 0, 1))
    assert grevlex_key((0, 2, 0)) > grevlex_key((1, 0, 1))
    assert grevlex_key((0, 0, 3)) > grevlex_key((2, 0, 0))


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p * q == q * p
    assert p + q == q + p
    assert p - p == MultiPoly.zero(3)


@settings(max_examples=60, deadline=None)
@given(polys(nvars=4), polys(nvars=4))
def test_product_matches_sympy(p, q):
    assert to_sympy(p * q, SYMS) == sympy.expand(to_sympy(p, SYMS) * to_sympy(q, SYMS))


@pytest.mark.parametrize("seed", range(4))
def test_kronecker_path_matches_schoolbook(seed):
    rng = random.Random(seed)
    p = random_homogeneous(4, 6 + seed, rng, coeff_range=9) * Fraction(1, 3)
    q = random_homogeneous(4, 5, rng, coeff_range=9)
    assert len(p) * len(q) >= KRONECKER_MIN_WORK
    assert (p * q).terms == _packed_mul(p, q).terms
    mixed = p + MultiPoly.variable(0, 4)  # not homogeneous: no variable is dropped
    assert (mixed * q).terms == _packed_mul(mixed, q).terms
    neg = -(p * 10**30)  # wide coefficient slots
    assert (neg * q).terms == _packed_mul(neg, q).terms


def test_schoolbook_matches_sympy():
    rng = random.Random(11)
    p = random_homogeneous(4, 3, rng) * Fraction(2, 7)
    q = random_homogeneous(4, 2, rng)
    assert to_sympy(_packed_mul(p, q), SYMS) == sympy.expand(to_sympy(p, SYMS) * to_sympy(q, SYMS))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 5).flatmap(lambda m: st.tuples(st.just(m), polys(homogeneous=m))))
def test_euler_identity(mp):
    m, p = mp
    assert sum((xi * p.partial(i) for i, xi in enumerate((x0, x1, x2))), MultiPoly.zero(3)) == m * p


@settings(max_examples=40, deadline=None)
@given(polys(max_degree=2), polys(max_degree=2), st.lists(polys(max_degree=2), min_size=3, max_size=3))
def test_compose_respects_products(p, q, subs):
    assert (p * q).compose(subs) == p.compose(subs) * q.compose(subs)


def test_compose_homogeneous_degree():
    rng = random.Random(3)
    p = random_homogeneous(3, 3, rng)
    subs = [random_homogeneous(3, 2, rng) for _ in range(3)]
    out = p.compose(subs)
    assert out.is_homogeneous() and out.degree() == 6


def test_scalars_stay_in_lowest_terms():
    p = Fraction(2, 4) * x0 + Fraction(3, 6) * x0
    assert p == x0 and p.terms[(1, 0, 0)] == 1
    assert all(isinstance(c, (int, Fraction)) for c in (Fraction(1, 3) * x0 * 3).terms.values())
