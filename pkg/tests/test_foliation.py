import random
from fractions import Fraction

import pytest

from branchfol.branched import random_branched_map
from branchfol.errors import EulerViolation, MixedDegrees, NotIntegrable, ZeroForm
from branchfol.forms import KForm, PolyVectorField, dx, lie_derivative
from branchfol.foliation import ProjFoliation, foliation_degree, is_integrable
from branchfol.identity import integrability_obstructed
from branchfol.plane import PlaneFoliation, random_plane_foliation, random_three_line_foliation
from branchfol.poly import MultiPoly
from branchfol.pullback import pullback

X, Y, Z = MultiPoly.variables(3)
WORKED = KForm.one_form([Z * Y**2, Z * X**2, -(X * Y**2 + X**2 * Y)])
PENCIL = KForm.one_form([-Y, X, MultiPoly.zero(3)])


def proportional(a: KForm, b: KForm) -> bool:
    """Equal up to a nonzero constant (foliations fix their form only projectively)."""
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    idx = min(b.coeffs)
    lam = Fraction(a.coefficient(idx).leading_coefficient()) / b.coefficient(idx).leading_coefficient()
    return a == b.scale(lam)


def test_from_one_form_examples():
    F = ProjFoliation.from_one_form(WORKED)
    assert F.n == 2 and F.degree == 2 and foliation_degree(F) == 2
    assert ProjFoliation.from_one_form(PENCIL).degree == 0
    with pytest.raises(EulerViolation):
        ProjFoliation.from_one_form(KForm.one_form([Y, MultiPoly.zero(3), MultiPoly.zero(3)]))


def test_from_one_form_errors():
    with pytest.raises(MixedDegrees):
        ProjFoliation.from_one_form(KForm.one_form([-Y**2, X, MultiPoly.zero(3)]))
    with pytest.raises(ZeroForm):
        ProjFoliation.from_one_form(KForm.zero(3, 1))
    with pytest.raises(ValueError):
        ProjFoliation.from_one_form(dx(0, 3) ^ dx(1, 3))
    z = MultiPoly.variables(4)
    contact = KForm.one_form([z[1], -z[0], z[3], -z[2]])
    with pytest.raises(NotIntegrable):
        ProjFoliation.from_one_form(contact)
    assert integrability_obstructed(contact)


def test_saturation_before_validation():
    F = ProjFoliation.from_one_form(WORKED.map_coeffs(lambda c: c * (X + 2 * Z)))
    assert F.degree == 2
    assert F.saturant is not None and F.saturant.degree() == 1
    G = ProjFoliation.from_one_form(F.omega)
    assert G.omega == F.omega  # idempotent


def test_singular_locus_generators():
    gens = ProjFoliation.from_one_form(PENCIL).singular_locus_generators()
    assert proportional(KForm.one_form(gens), PENCIL)
    F = ProjFoliation.from_one_form(WORKED)
    assert F.singular_locus_generators() == [Z * Y**2, Z * X**2, -(X * Y**2 + X**2 * Y)]


def test_invariant_hypersurfaces():
    F = ProjFoliation.from_one_form(WORKED)
    assert F.invariant_hypersurface_check(Z)
    assert not F.invariant_hypersurface_check(X + Y + Z)
    assert ProjFoliation.from_one_form(PENCIL).invariant_hypersurface_check(X)
    with pytest.raises(ValueError):
        F.invariant_hypersurface_check(X + 1)


def test_invariant_product_property():
    for seed in range(5):
        G = random_plane_foliation(2, seed)
        F = ProjFoliation.from_one_form(G.omega)
        assert F.invariant_hypersurface_check(Z)
        assert F.invariant_hypersurface_check(Z * Z)
        T = ProjFoliation.from_one_form(random_three_line_foliation(2, seed).omega)
        assert all(T.invariant_hypersurface_check(P) for P in (X, Y, Z))
        assert T.invariant_hypersurface_check(X * Y) and T.invariant_hypersurface_check(X * Y * Z)


def test_restrict_affine():
    u, v = MultiPoly.variables(2)
    pencil = ProjFoliation.from_one_form(PENCIL)
    assert proportional(pencil.restrict_affine(0), KForm.one_form([MultiPoly.constant(1, 2), MultiPoly.zero(2)]))
    assert proportional(pencil.restrict_affine(2), KForm.one_form([-v, u]))
    F = ProjFoliation.from_one_form(WORKED)
    assert F.restrict_affine(2) == KForm.one_form([v**2, u**2])
    with pytest.raises(IndexError):
        F.restrict_affine(3)


def test_lie_radial_ladder():
    for seed in range(5):
        F = ProjFoliation.from_one_form(random_plane_foliation(1 + seed % 3, seed).omega)
        R = PolyVectorField.radial(3)
        assert lie_derivative(R, F.omega) == F.omega.scale(F.degree + 2)
        assert F.lie_radial_multiplier() == F.degree + 2


def test_euler_never_non_integrable_in_three_variables():
    for seed in range(20):
        omega = random_plane_foliation(2, seed + 50).omega
        assert is_integrable(omega, prefilter=False)
        ProjFoliation.from_one_form(omega)


def test_prefilter_agrees_with_exact():
    for seed in range(5):
        omega = random_plane_foliation(2, seed).omega
        assert not integrability_obstructed(omega)
    z = MultiPoly.variables(4)
    tweak = KForm.one_form([z[1] * z[2], -z[0] * z[2], z[3] ** 2, -z[2] * z[3]])
    assert integrability_obstructed(tweak) == (not is_integrable(tweak, prefilter=False))


def _pencil_on(nvars):
    z = MultiPoly.variables(nvars)
    coeffs = [MultiPoly.zero(nvars)] * nvars
    coeffs[0], coeffs[1] = -z[1], z[0]
    return KForm.one_form(coeffs)


def test_restrict_3plane_identity():
    z = MultiPoly.variables(4)
    f = random_branched_map(3, 2, 1, 2, seed=1)
    F = pullback(f, PlaneFoliation.from_AB(Y**2, X**2)).foliation
    assert F.restrict_3plane(z).omega == F.omega


def test_restrict_3plane_coordinate_plane():
    z4 = MultiPoly.variables(4)
    F = ProjFoliation.from_one_form(_pencil_on(5))
    plane = list(z4) + [MultiPoly.zero(4)]
    R = F.restrict_3plane(plane)
    assert R.n == 3 and proportional(R.omega, _pencil_on(4))


def test_restrict_3plane_random_plane_of_pullback():
    rng = random.Random(5)
    f = random_branched_map(4, 2, 1, 2, seed=3)
    res = pullback(f, PlaneFoliation.from_AB(Y**2, X**2))
    F = res.foliation
    assert F.n == 4 and F.degree == 5
    w = MultiPoly.variables(4)
    plane = []
    for i in range(5):
        plane.append(sum((w[j] * Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for j in range(4)),
                         MultiPoly.zero(4)))
    R = F.restrict_3plane(plane)
    assert R.n == 3 and R.degree == 5
    assert is_integrable(R.omega, prefilter=False)


def test_restrict_3plane_rejects_degenerate():
    w = MultiPoly.variables(4)
    F = ProjFoliation.from_one_form(_pencil_on(5))
    with pytest.raises(ValueError):
        F.restrict_3plane([w[0], w[1], w[2], w[2], w[0] + w[1]])
    with pytest.raises(ValueError):
        ProjFoliation.from_one_form(PENCIL).restrict_3plane(w[:3])
