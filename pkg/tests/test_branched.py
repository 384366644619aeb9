from fractions import Fraction

import pytest

from branchfol.branched import (BranchedMap, indeterminacy_points_numeric, random_branched_map, rational_point)
from branchfol.errors import (BadExponents, CertificationInconclusive, CommonFactor, DegreeRelationViolated,
                              PointNotOnLocus)
from branchfol.forms import KForm, pullback_form
from branchfol.poly import MultiPoly

z0, z1, z2, z3 = MultiPoly.variables(4)
WORKED = BranchedMap.create(z0**2 - z1 * z3, z1**2 - z0 * z3, z2, alpha=1, gamma=2)


def test_validate_examples():
    assert (WORKED.n, WORKED.nu, WORKED.alpha, WORKED.gamma) == (3, 2, 1, 2)
    H = z0 + z3
    with pytest.raises(CommonFactor):
        BranchedMap.create(z2 * H, z1**2 - z0 * z3, z2, alpha=1, gamma=2)
    with pytest.raises(CommonFactor):
        BranchedMap.create(z3 * z0, z3 * z1, z3, alpha=1, gamma=2)
    with pytest.raises(DegreeRelationViolated):
        BranchedMap.create(z0**2, z1**2, z2**2, alpha=1, gamma=3, nu=2)
    with pytest.raises(BadExponents):
        BranchedMap.create(z0, z1, z2, alpha=1, gamma=1)
    with pytest.raises(BadExponents):
        BranchedMap(3, 2, 0, 2, z0**2, z1**2, z2).validate()


def test_indeterminacy_ideal_and_degrees():
    assert WORKED.indeterminacy_ideal() == [z0**2 - z1 * z3, z1**2 - z0 * z3, z2]
    assert WORKED.degree_product() == 4
    assert sum(1 for F in WORKED.indeterminacy_ideal() if F.degree() == 1) == 1


def test_bezout_count():
    assert WORKED.bezout_count() == 4
    f = random_branched_map(3, 6, 2, 3, seed=0)
    assert f.bezout_count() == 18
    with pytest.raises(ValueError):
        random_branched_map(4, 2, 1, 2, seed=0).bezout_count()


@pytest.mark.parametrize("nu,alpha,gamma", [(2, 1, 2), (4, 2, 2), (6, 2, 3), (3, 1, 3), (4, 1, 2)])
def test_bezout_is_degree_product(nu, alpha, gamma):
    f = random_branched_map(3, nu, alpha, gamma, seed=nu + gamma)
    assert f.degree_product() == f.bezout_count() == Fraction(nu**3, alpha**2 * gamma)


def test_random_map_rejects_indivisible_degree():
    with pytest.raises(DegreeRelationViolated):
        random_branched_map(3, 3, 1, 2, seed=0)


def test_genericity_examples():
    cert = WORKED.genericity_check([[0, 0, 0, 1]])
    assert cert.checked_points[0].on_locus and cert.checked_points[0].rank3
    bad = BranchedMap.create(z0**2, z1**2, z2, alpha=1, gamma=2)
    assert not bad.genericity_check([[0, 0, 0, 1]]).checked_points[0].rank3
    empty = WORKED.genericity_check([])
    assert empty.checked_points == [] and empty.gold_standard is None
    assert empty.to_json()["gold_standard"] is None
    with pytest.raises(PointNotOnLocus):
        WORKED.genericity_check([[1, 0, 0, 0]])


def test_certification():
    assert WORKED.genericity_check(certify=True).gold_standard is True
    bad = BranchedMap.create(z0**2, z1**2, z2, alpha=1, gamma=2)
    assert bad.genericity_check(certify=True).gold_standard is False
    with pytest.raises(CertificationInconclusive):
        WORKED.genericity_check(certify=True, max_pairs=0)


def test_critical_components():
    comps = WORKED.critical_components()
    assert comps["X2_poly"] == z2
    assert len(comps["X1_generators"]) == 4
    lin = BranchedMap.create(z0, z1, z2, alpha=2, gamma=2)
    minors = lin.critical_components()["X1_generators"]
    assert all(m.is_constant() for m in minors) and any(not m.is_zero() for m in minors)
    assert lin.critical_components()["X2_poly"] == z0 * z1 * z2


def test_weighted_factorization():
    wf = WORKED.weighted_factorization()
    x0, x1, x2 = MultiPoly.variables(3)
    assert wf["fbar"] == [z0**2 - z1 * z3, z1**2 - z0 * z3, z2]
    assert wf["fw"] == [x0, x1, x2**2]
    assert [p.compose(wf["fbar"]) for p in wf["fw"]] == [WORKED.F0, WORKED.F1, WORKED.F2**2]
    assert wf["weights"] == (2, 2, 1)
    pencil = KForm.one_form([-x1, x0, MultiPoly.zero(3)])
    assert pullback_form(pencil, wf["fw"]) == pencil
    with pytest.raises(BadExponents):
        BranchedMap.create(z0, z1, z2, alpha=2, gamma=2).weighted_factorization()


def test_numeric_indeterminacy_points():
    pts = indeterminacy_points_numeric(WORKED)
    assert len(pts) == 4
    rational = sorted(q for q in (rational_point(z, WORKED) for z in pts) if q is not None)
    assert [tuple(q) for q in rational] == [(0, 0, 0, 1), (1, 1, 0, 1)]
    # deterministic in the seed
    assert len(indeterminacy_points_numeric(WORKED, seed=3)) == 4
