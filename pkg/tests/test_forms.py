from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from branchfol.forms import (KForm, PolyVectorField, contract, dx, exterior_derivative, lie_bracket,
                             lie_derivative, pullback_form, rot3, wedge)
from branchfol.plane import random_plane_foliation
from branchfol.poly import MultiPoly
from branchfol.pullback import local_model, weighted_radial

from helpers import forms, polys

x0, x1, x2 = MultiPoly.variables(3)
d0, d1, d2 = (dx(i, 3) for i in range(3))
MU = KForm.volume3()


def fn(p):
    return KForm.function(p)


def test_wedge_examples():
    assert wedge(d0, d0).is_zero()
    assert wedge(d0, d1) == -wedge(d1, d0)
    assert wedge(d1 * x1, d0 * x0) == -(wedge(d0, d1) * (x0 * x1))
    assert wedge(d0 * x1, d1 * x0) == wedge(d0, d1) * (x0 * x1)


def test_exterior_derivative_examples():
    assert exterior_derivative(d1 * x0) == wedge(d0, d1)
    p = x0**2 * x1 - x2**3
    assert exterior_derivative(exterior_derivative(fn(p))).is_zero()
    assert exterior_derivative(fn(MultiPoly.constant(5, 3))).is_zero()
    assert exterior_derivative(MU).is_zero()


def test_contract_examples():
    e2 = PolyVectorField.coordinate(2, 3)
    assert contract(e2, MU) == wedge(d0, d1)
    A = [x1**2, x0 * x2, x2**2 - x0 * x1]
    omega = KForm.one_form(A)
    R = PolyVectorField.radial(3)
    assert contract(R, omega).as_function() == x0 * A[0] + x1 * A[1] + x2 * A[2]
    v = PolyVectorField([x1, x2 - x0, x0 * x1])
    assert contract(v, contract(v, MU)).is_zero()
    with pytest.raises(ValueError):
        contract(v, fn(x0))


def test_lie_derivative_examples():
    G = random_plane_foliation(2, seed=4)
    omega = G.omega  # coefficients of degree 3, i_R omega = 0
    R = PolyVectorField.radial(3)
    assert lie_derivative(R, omega) == omega.scale(4)
    v = PolyVectorField([x1, x0, x2])
    assert lie_derivative(v, fn(MultiPoly.zero(3))).is_zero()
    eta = local_model(random_plane_foliation(2, seed=0), 2)
    assert lie_derivative(weighted_radial(2), eta) == eta.scale(7)


def test_lie_bracket_examples():
    R = PolyVectorField.radial(3)
    c = PolyVectorField.coordinate(0, 3, coeff=Fraction(3, 2))
    assert lie_bracket(R, c) == c.scale(-1)
    v = PolyVectorField([x1 * x2, x0**2, x1])
    assert all(comp.is_zero() for comp in lie_bracket(v, v).components)
    # weighted radial field rescales a monomial field by its weight defect
    S = PolyVectorField.weighted_radial([2, 2, 1])
    Zm = PolyVectorField([MultiPoly.zero(3), MultiPoly.zero(3), x0 * x1])
    assert lie_bracket(S, Zm) == Zm.scale(2 + 2 - 1)


def test_rot3_examples():
    assert rot3(wedge(d0, d1)) == PolyVectorField.coordinate(2, 3)
    assert rot3(exterior_derivative(d1 * x0)) == PolyVectorField.coordinate(2, 3)
    with pytest.raises(ValueError):
        rot3(d0)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2).flatmap(lambda k: forms(k=k)))
def test_d_squared_zero(a):
    assert exterior_derivative(exterior_derivative(a)).is_zero()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2).flatmap(lambda k: forms(k=k)), st.integers(0, 2).flatmap(lambda k: forms(k=k)))
def test_graded_commutativity_and_leibniz(a, b):
    sign = (-1) ** (a.k * b.k)
    assert wedge(a, b) == wedge(b, a).scale(sign)
    lhs = exterior_derivative(wedge(a, b))
    rhs = wedge(exterior_derivative(a), b) + wedge(a, exterior_derivative(b)).scale((-1) ** a.k)
    assert lhs == rhs


@settings(max_examples=30, deadline=None)
@given(forms(k=1), polys(max_degree=2), polys(max_degree=2), polys(max_degree=2))
def test_cartan_commutes_with_d(a, p, q, r):
    v = PolyVectorField([p, q, r])
    assert lie_derivative(v, exterior_derivative(a)) == exterior_derivative(lie_derivative(v, a))


@settings(max_examples=30, deadline=None)
@given(forms(k=2))
def test_rot3_round_trip(w):
    assert contract(rot3(w), MU) == w


@pytest.mark.parametrize("seed", range(10))
def test_euler_forces_integrability(seed):
    omega = random_plane_foliation(1 + seed % 3, seed=seed).omega
    assert contract(PolyVectorField.radial(3), omega).is_zero()
    assert wedge(omega, exterior_derivative(omega)).is_zero()


@settings(max_examples=20, deadline=None)
@given(forms(k=1, max_degree=2), forms(k=1, max_degree=2),
       st.lists(polys(max_degree=2, max_terms=3), min_size=3, max_size=3))
def test_pullback_naturality(a, b, subs):
    assert pullback_form(exterior_derivative(a), subs) == exterior_derivative(pullback_form(a, subs))
    assert pullback_form(wedge(a, b), subs) == wedge(pullback_form(a, subs), pullback_form(b, subs))


def test_forms_in_more_variables():
    z = MultiPoly.variables(5)
    a = KForm.one_form([z[1], -z[0], z[3], -z[2], MultiPoly.zero(5)])
    da = exterior_derivative(a)
    assert da.k == 2 and not da.is_zero()
    assert exterior_derivative(da).is_zero()
    with pytest.raises(ValueError):
        rot3(da)
