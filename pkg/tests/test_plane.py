from fractions import Fraction

import pytest

from branchfol.errors import CommonFactor, DegreeMismatch, PointNotSingular, ZeroForm
from branchfol.foliation import ProjFoliation
from branchfol.forms import KForm
from branchfol.linalg import exact_eigenvalues, hyperbolic_numeric, is_hyperbolic_exact, ordered_eigenvalues
from branchfol.plane import (PlaneFoliation, X, Y, Z, random_plane_foliation, random_three_line_foliation,
                             total_multiplicity)
from branchfol.poly import MultiPoly

WORKED = PlaneFoliation.from_AB(Y**2, X**2)


def test_from_AB_examples():
    assert WORKED.d == 2 and WORKED.invariant_line == Z
    assert WORKED.omega == KForm.one_form([Z * Y**2, Z * X**2, -(X * Y**2 + X**2 * Y)])
    G1 = PlaneFoliation.from_AB(Y, X)
    assert G1.d == 1
    assert G1.omega == KForm.one_form([Z * Y, Z * X, -2 * X * Y])
    zero = MultiPoly.zero(3)
    with pytest.raises(ZeroForm):
        PlaneFoliation.from_AB(zero, zero)
    with pytest.raises(DegreeMismatch):
        PlaneFoliation.from_AB(Y**2, X)
    with pytest.raises(CommonFactor):
        PlaneFoliation.from_AB(X * Y, X**2)  # X divides every coefficient


def test_C_and_euler():
    C = WORKED.C
    assert C == -X * WORKED.A - Y * WORKED.B
    R_dot = X * Z * WORKED.A + Y * Z * WORKED.B + Z * C
    assert R_dot.is_zero()


def test_worked_singularities():
    pts = WORKED.singular_points()
    assert total_multiplicity(pts) == WORKED.expected_singular_count() == 7
    origin = [p for p in pts if p.chart == 2 and max(abs(complex(c)) for c in p.location) < 1e-9]
    assert len(origin) == 1 and origin[0].multiplicity == 4 and not origin[0].nondegenerate
    r = WORKED.analyze_singularity([0, 0], chart=2)
    assert r.exact and r.jacobian == ((0, 0), (0, 0))


def test_pencil_has_one_singular_point():
    G = PlaneFoliation.from_foliation(ProjFoliation.from_one_form(KForm.one_form([-Y, X, MultiPoly.zero(3)])))
    pts = G.singular_points()
    assert len(pts) == 1 and pts[0].chart == 2 and pts[0].multiplicity == 1
    assert G.expected_singular_count() == 1


def _linear_G(J):
    """Degree-1 foliation whose chart Z = 1 field (-b, a) has Jacobian ``J`` at the origin."""
    (p, q), (r, s) = J
    A = r * X + s * Y
    B = -(p * X + q * Y)
    return PlaneFoliation.from_AB(A, B)


def test_analyze_hyperbolic():
    r = _linear_G([[1, 1], [-1, 1]]).analyze_singularity([0, 0])
    assert r.nondegenerate and r.hyperbolic
    assert abs(complex(r.characteristic_ratio).imag) > 0.5


def test_analyze_real_diagonal():
    r = _linear_G([[2, 0], [0, 1]]).analyze_singularity([0, 0])
    assert r.nondegenerate and not r.hyperbolic
    assert r.characteristic_ratio in (2, Fraction(1, 2))


@pytest.mark.parametrize("lam", [Fraction(3), Fraction(-2, 5), Fraction(7, 3)])
def test_cs_index_of_diagonal(lam):
    r = _linear_G([[1, 0], [0, lam]]).analyze_singularity([0, 0])
    assert r.cs_index_plus == lam
    assert r.cs_index_minus == 1 / lam


def test_point_not_singular():
    with pytest.raises(PointNotSingular):
        WORKED.analyze_singularity([1, 2])


def test_cs_indices_are_reciprocal():
    for seed in range(5):
        for p in random_plane_foliation(2, seed).singular_points():
            if p.nondegenerate:
                assert abs(complex(p.cs_index_plus) * complex(p.cs_index_minus) - 1) < 1e-8


def test_random_generator_is_deterministic():
    a, b = random_plane_foliation(2, 9), random_plane_foliation(2, 9)
    assert a.omega == b.omega
    assert random_plane_foliation(2, 10).omega != a.omega
    with pytest.raises(ValueError):
        random_plane_foliation(0, 1)


def test_count_is_chart_and_shear_independent():
    for seed in range(4):
        G = random_plane_foliation(2, seed)
        counts = {total_multiplicity(G.singular_points(seed=s)) for s in range(3)}
        assert counts == {7}
    G3 = random_plane_foliation(3, 1)
    assert total_multiplicity(G3.singular_points()) == 13


def test_exact_mode_on_rational_points():
    pts = WORKED.singular_points(mode="exact")
    assert all(p.exact for p in pts)
    cs = sorted(p.cs_index_plus for p in pts if p.nondegenerate)
    assert cs == [-1, 1, 1]


def test_three_line_foliation_has_three_invariant_lines():
    G = random_three_line_foliation(2, 0)
    F = ProjFoliation.from_one_form(G.omega)
    assert all(F.invariant_hypersurface_check(P) for P in (X, Y, Z))


# -- linear algebra -------------------------------------------------------

def test_hyperbolic_tests_on_edge_cases():
    cases = [
        [[1, 1], [-1, 1]],  # 1 +- i
        [[2, 0], [0, 1]],
        [[1, 0], [0, -1]],  # trace 0: ratio -1
        [[1, 1], [0, 1]],  # Jordan block: tr^2/det = 4
        [[0, -1], [1, 0]],  # +- i, ratio -1
        [[3, -5], [1, -1]],  # eigenvalues 1 +- i
    ]
    expected = [True, False, False, False, False, True]
    for J, e in zip(cases, expected):
        assert is_hyperbolic_exact(J) == e == hyperbolic_numeric(J)


def test_exact_eigenvalues():
    assert sorted(exact_eigenvalues([[2, 0], [0, 1]])) == [1, 2]
    assert exact_eigenvalues([[0, 2], [1, 0]]) is None  # +- sqrt 2
    lp, lm = ordered_eigenvalues([[1, 0], [0, 5]], exact=True)
    assert (lp, lm) == (1, 5)
