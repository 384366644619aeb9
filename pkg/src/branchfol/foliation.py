"""Codimension-one foliations on projective space.

A :class:`ProjFoliation` is a saturated homogeneous 1-form on C^{n+1} that
satisfies the Euler condition ``i_R omega = 0`` and the integrability condition
``omega ^ d omega = 0``.  Representatives are scaled so that the first nonzero
coefficient (in ``dz_0, dz_1, ...`` order) has grevlex leading coefficient 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

from .errors import ArityError, EulerViolation, MixedDegrees, NotIntegrable, ZeroForm
from .forms import KForm, PolyVectorField, contract, exterior_derivative, pullback_form, saturate, wedge
from .gcd import divide_exact
from .identity import integrability_obstructed
from .poly import MultiPoly


def euler_defect(omega: KForm) -> MultiPoly:
    """``i_R omega`` for the radial field ``R``."""
    return contract(PolyVectorField.radial(omega.nvars), omega).as_function()


def integrability_defect(omega: KForm) -> KForm:
    return wedge(omega, exterior_derivative(omega))


def integral_multiple(omega: KForm) -> KForm:
    """A nonzero scalar multiple of ``omega`` with integer coefficients."""
    from math import lcm

    den = 1
    for c in omega.coeffs.values():
        for v in c.terms.values():
            if isinstance(v, Fraction):
                den = lcm(den, v.denominator)
    return omega if den == 1 else omega.scale(den)


def is_integrable(omega: KForm, prefilter: bool = True) -> bool:
    if prefilter and integrability_obstructed(omega):
        return False
    # the condition is invariant under scaling, and integer arithmetic is faster
    return integrability_defect(integral_multiple(omega)).is_zero()


def normalize_representative(omega: KForm) -> tuple:
    """Return ``(scale, omega / scale)`` with the canonical leading coefficient 1."""
    first = omega.items()[0][1]
    lead = first.leading_coefficient()
    return lead, omega.scale(Fraction(1) / lead)


@dataclass(frozen=True)
class ProjFoliation:
    """A validated, saturated foliation on P^n.

    ``saturant`` records the polynomial (including the scalar normalisation)
    that was divided out of the input form: ``input == saturant * omega``.
    """

    n: int
    omega: KForm
    degree: int
    saturant: MultiPoly = field(default=None, compare=False, repr=False)

    @classmethod
    def from_one_form(cls, omega: KForm, check_integrability: bool = True) -> "ProjFoliation":
        if omega.k != 1:
            raise ValueError(f"a foliation is defined by a 1-form, got a {omega.k}-form")
        if omega.is_zero():
            raise ZeroForm("the zero form does not define a foliation")
        if not all(c.is_homogeneous() for c in omega.coeffs.values()) or len(omega.coefficient_degrees()) != 1:
            raise MixedDegrees(f"coefficient degrees {sorted(omega.coefficient_degrees())} are not one common degree")
        g, sat = saturate(omega)
        lead, sat = normalize_representative(sat)
        saturant = g.scale(lead)
        defect = euler_defect(sat)
        if defect:
            raise EulerViolation(f"i_R omega = {defect} is not zero")
        if check_integrability and not is_integrable(sat):
            raise NotIntegrable("omega ^ d omega is not zero")
        (deg,) = sat.coefficient_degrees()
        return cls(omega.nvars - 1, sat, deg - 1, saturant)

    @property
    def nvars(self) -> int:
        return self.n + 1

    def coefficients(self) -> List[MultiPoly]:
        return self.omega.one_form_coeffs()

    def singular_locus_generators(self) -> List[MultiPoly]:
        """Coefficients of omega: generators of the singular ideal."""
        return self.coefficients()

    def invariant_hypersurface_check(self, P: MultiPoly) -> bool:
        """``P = 0`` is invariant iff ``P`` divides every coefficient of ``omega ^ dP``."""
        if P.nvars != self.nvars:
            raise ArityError(f"hypersurface has {P.nvars} variables, foliation has {self.nvars}")
        if P.is_zero() or not P.is_homogeneous():
            raise ValueError("invariant-hypersurface candidate must be nonzero and homogeneous")
        if P.is_constant():
            return True
        tangency = wedge(self.omega, exterior_derivative(KForm.function(P)))
        return all(divide_exact(c, P) is not None for c in tangency.coeffs.values())

    def restrict_affine(self, chart: int) -> KForm:
        """Set ``z_chart = 1`` and drop ``dz_chart``; a 1-form in ``n`` variables."""
        if not 0 <= chart < self.nvars:
            raise IndexError(f"chart index {chart} out of range for {self.nvars} variables")
        return affine_restriction(self.omega, chart)

    def restrict_3plane(self, plane: Sequence[MultiPoly]) -> "ProjFoliation":
        """Pull back along a linear embedding C^4 -> C^{n+1} and re-saturate.

        ``plane[i]`` gives ambient coordinate ``z_i`` as a linear form in four
        variables.
        """
        if self.n < 3:
            raise ValueError("restriction to a 3-plane needs n >= 3")
        if len(plane) != self.nvars:
            raise ArityError(f"need {self.nvars} linear forms, got {len(plane)}")
        if any(p.nvars != 4 for p in plane):
            raise ArityError("3-plane parametrisation must use 4 variables")
        if any(p and (not p.is_homogeneous() or p.degree() != 1) for p in plane):
            raise ValueError("3-plane parametrisation must be linear")
        from .linalg import rank

        rows = [[p.coefficient(tuple(int(i == j) for i in range(4))) for j in range(4)] for p in plane]
        if rank(rows) < 4:
            raise ValueError("degenerate 3-plane parametrisation (not injective)")
        return ProjFoliation.from_one_form(pullback_form(self.omega, plane))

    def lie_radial_multiplier(self) -> int:
        return self.degree + 2


def affine_restriction(omega: KForm, chart: int) -> KForm:
    coeffs = {}
    for idx, c in omega.coeffs.items():
        if chart in idx:
            continue
        new_idx = tuple(i if i < chart else i - 1 for i in idx)
        coeffs[new_idx] = c.substitute({chart: 1}).drop_variable(chart)
    return KForm(omega.nvars - 1, omega.k, coeffs)


def from_one_form(omega: KForm) -> ProjFoliation:
    return ProjFoliation.from_one_form(omega)


def foliation_degree(F: ProjFoliation) -> int:
    return F.degree
