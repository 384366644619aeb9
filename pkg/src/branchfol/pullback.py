"""Pull-back foliations ``f^* G`` and their local singularity certificates."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Union

from .branched import BranchedMap
from .errors import CheckFailure, NonIntegerDegree, PointNotSingular, ZeroForm
from .foliation import ProjFoliation, affine_restriction
from .forms import (KForm, PolyVectorField, contract, exterior_derivative, lie_bracket, lie_derivative,
                    pullback_form, rot3)
from .gcd import divide_exact
from .plane import PlaneFoliation
from .poly import MultiPoly


def expected_degree(nu: int, alpha: int, beta: int, gamma: int, d: int) -> int:
    """``nu * ((d - 1) + 1/alpha + 1/beta + 1/gamma) - 2``."""
    if min(nu, alpha, beta, gamma) < 1 or d < 0:
        raise NonIntegerDegree("parameters must be positive")
    k = nu * (Fraction(d - 1) + Fraction(1, alpha) + Fraction(1, beta) + Fraction(1, gamma)) - 2
    if k.denominator != 1:
        raise NonIntegerDegree(f"expected degree {k} is not an integer for nu={nu}, alpha={alpha}, "
                               f"beta={beta}, gamma={gamma}, d={d}")
    return int(k)


def displayed_coefficient_degree(nu: int, gamma: int, d: int) -> Fraction:
    """Coefficient degree of the alpha = 1 displayed pull-back form."""
    return nu * (d + 1 + Fraction(1, gamma)) - 1


@dataclass
class PullbackResult:
    source: BranchedMap
    plane: PlaneFoliation
    raw_form: KForm
    saturant: MultiPoly
    foliation: ProjFoliation
    expected_degree: Optional[int]
    displayed_form: Optional[KForm] = None
    formula_agrees: Optional[bool] = None

    @property
    def degree(self) -> int:
        return self.foliation.degree

    @property
    def raw_degree(self) -> int:
        (deg,) = self.raw_form.coefficient_degrees()
        return deg

    @property
    def saturant_degree(self) -> int:
        return self.saturant.degree()

    @property
    def degree_matches(self) -> bool:
        return self.expected_degree is not None and self.degree == self.expected_degree

    @property
    def bookkeeping_ok(self) -> bool:
        """deg raw = deg saturant + deg saturated coefficients."""
        return self.raw_degree == self.saturant_degree + self.foliation.degree + 1

    @property
    def generic(self) -> bool:
        return self.degree_matches

    def to_json(self) -> dict:
        return {
            "expected_degree": self.expected_degree,
            "actual_degree": self.degree,
            "raw_coefficient_degree": self.raw_degree,
            "saturant_degree": self.saturant_degree,
            "formula_agrees": self.formula_agrees,
            "generic": self.generic,
        }


def _known_factor(f: BranchedMap) -> MultiPoly:
    return (f.F0 ** (f.alpha - 1)) * (f.F1 ** (f.alpha - 1)) * (f.F2 ** (f.gamma - 1))


def displayed_pullback(f: BranchedMap, G: PlaneFoliation) -> KForm:
    """``F2 (A o f) dF0 + F2 (B o f) dF1 + gamma (C o f) dF2`` for alpha = 1."""
    if f.alpha != 1 or G.A is None or G.B is None:
        raise ValueError("the displayed formula needs alpha = 1 and an (A, B) foliation")
    lifted = f.lifted()
    Ac, Bc, Cc = (p.compose(lifted) for p in (G.A, G.B, G.C))
    dF = [exterior_derivative(KForm.function(F)) for F in f.components]
    return dF[0] * (f.F2 * Ac) + dF[1] * (f.F2 * Bc) + dF[2] * Cc.scale(f.gamma)


def pullback(f: BranchedMap, G: PlaneFoliation, check_integrability: bool = True) -> PullbackResult:
    """Pull back ``G`` along ``f`` and saturate.

    The chain-rule pull-back along ``(F0^alpha, F1^alpha, F2^gamma)`` is always
    computed.  For alpha = 1 and an ``(A, B)`` foliation the displayed formula
    is computed independently and must equal the chain-rule form divided by
    ``F2^(gamma - 1)``.
    """
    if G.base.n != 2:
        raise ValueError("G must be a foliation on P^2")
    raw = pullback_form(G.omega, f.lifted())
    if raw.is_zero():
        raise ZeroForm("the pull-back form vanishes identically (degenerate pair)")
    displayed = None
    agrees = None
    known = _known_factor(f)
    if f.alpha == 1 and G.A is not None:
        displayed = displayed_pullback(f, G)
        agrees = displayed.map_coeffs(lambda c: c * known) == raw
        if not agrees:
            raise CheckFailure("displayed pull-back formula disagrees with the chain-rule pull-back")
        reduced = displayed
    else:
        quotient = {}
        for idx, c in raw.coeffs.items():
            q = divide_exact(c, known)
            if q is None:
                break
            quotient[idx] = q
        if len(quotient) == len(raw.coeffs):
            reduced = KForm(raw.nvars, 1, quotient)
        else:
            known = MultiPoly.constant(1, raw.nvars)
            reduced = raw
    F = ProjFoliation.from_one_form(reduced, check_integrability=check_integrability)
    saturant = F.saturant * known
    try:
        expected = expected_degree(f.nu, f.alpha, f.alpha, f.gamma, G.d)
    except NonIntegerDegree:
        expected = None
    return PullbackResult(f, G, raw, saturant, F, expected, displayed, agrees)


# ---------------------------------------------------------------------------
# fibers
# ---------------------------------------------------------------------------

def fiber_ideal(f: BranchedMap, target: Sequence) -> List[MultiPoly]:
    """Generators of the closure of ``f^{-1}(target)``.

    With pivot ``k`` the first nonzero coordinate of ``t``, the generators are
    ``t_j P_k - t_k P_j`` for ``j != k`` where ``P = (F0^a, F1^a, F2^g)``.  A
    generator that is a multiple of a single ``P_j`` is replaced by ``F_j``.
    """
    t = [Fraction(x) for x in target]
    if len(t) != 3:
        raise ValueError("target must be a point of P^2")
    if all(x == 0 for x in t):
        raise ValueError("the zero vector is not a projective point")
    P = f.lifted()
    k = next(i for i, x in enumerate(t) if x != 0)
    gens = []
    for j in range(3):
        if j == k:
            continue
        if t[j] == 0:
            gens.append(f.components[j])
        else:
            gens.append(P[k].scale(t[j]) - P[j].scale(t[k]))
    return gens


# ---------------------------------------------------------------------------
# local certificates
# ---------------------------------------------------------------------------

@dataclass
class LocalCertificate:
    point: tuple
    kind: str  # Kupka | GKCandidate | QuasiHomogeneous | NotSingular
    d_eta_nonzero: bool
    Z_field: Optional[PolyVectorField] = None
    DZ_matrix: Optional[List[List[Fraction]]] = None
    bracket_ell: Optional[int] = None
    lie_multiplier: Optional[int] = None
    failed: List[str] = field(default_factory=list)
    qh_type: Optional[tuple] = None
    reconstruction_lambda: Optional[Fraction] = None
    chart: Optional[int] = None

    def to_json(self) -> dict:
        return {
            "point": [str(x) for x in self.point],
            "kind": self.kind,
            "d_eta_nonzero": self.d_eta_nonzero,
            "DZ_matrix": None if self.DZ_matrix is None else [[str(x) for x in r] for r in self.DZ_matrix],
            "bracket_ell": self.bracket_ell,
            "lie_multiplier": self.lie_multiplier,
            "failed": list(self.failed),
            "type": None if self.qh_type is None else list(self.qh_type),
            "reconstruction_lambda": None if self.reconstruction_lambda is None else str(self.reconstruction_lambda),
        }


def kupka_certificate(F: Union[ProjFoliation, KForm], point: Sequence, chart: Optional[int] = None) -> LocalCertificate:
    """Decide whether a singular point is of Kupka type (``d omega(p) != 0``).

    ``F`` is either a projective foliation with a projective point, or an
    affine 1-form with an affine point.
    """
    pt = [Fraction(x) for x in point]
    if isinstance(F, ProjFoliation):
        if len(pt) != F.nvars or all(x == 0 for x in pt):
            raise ValueError("need a nonzero projective point with n+1 coordinates")
        if any(c.evaluate(pt) != 0 for c in F.omega.coeffs.values()):
            raise PointNotSingular(f"omega does not vanish at {tuple(str(x) for x in pt)}")
        if chart is None:
            chart = next(i for i, x in enumerate(pt) if x != 0)
        if pt[chart] == 0:
            raise ValueError(f"point is not in chart {chart}")
        affine = [x / pt[chart] for i, x in enumerate(pt) if i != chart]
        eta = affine_restriction(F.omega, chart)
        proj = tuple(pt)
    else:
        eta = F
        affine = pt
        if any(c.evaluate(affine) != 0 for c in eta.coeffs.values()):
            raise PointNotSingular(f"the form does not vanish at {tuple(str(x) for x in pt)}")
        proj = tuple(pt)
    d_eta = exterior_derivative(eta)
    nonzero = any(c.evaluate(affine) != 0 for c in d_eta.coeffs.values())
    Zf = rot3(d_eta) if eta.nvars == 3 else None
    return LocalCertificate(proj, "Kupka" if nonzero else "GKCandidate", nonzero, Z_field=Zf, chart=chart,
                            failed=[] if nonzero else ["d_eta_nonzero"])


def local_model(G: PlaneFoliation, gamma: int) -> KForm:
    """``x2 A(x0, x1, x2^g) dx0 + x2 B(...) dx1 + g C(...) dx2``."""
    if G.A is None or G.B is None:
        raise ValueError("local model needs an (A, B) plane foliation")
    x0, x1, x2 = MultiPoly.variables(3)
    subs = [x0, x1, x2 ** gamma]
    A, B, C = (p.compose(subs) for p in (G.A, G.B, G.C))
    return KForm.one_form([x2 * A, x2 * B, C.scale(gamma)])


def weighted_radial(gamma: int) -> PolyVectorField:
    return PolyVectorField.weighted_radial([gamma, gamma, 1])


def _ratio(a: MultiPoly, b: MultiPoly) -> Optional[Fraction]:
    """``a / b`` when ``a`` is a constant multiple of ``b`` (grevlex-first match)."""
    if b.is_zero():
        return None
    exps, c = b.leading_term()
    lam = Fraction(a.coefficient(exps)) / Fraction(c)
    return lam if a == b.scale(lam) else None


def _form_ratio(a: KForm, b: KForm) -> Optional[Fraction]:
    if b.is_zero():
        return None
    idx, c = b.items()[0]
    lam = _ratio(a.coefficient(idx), c)
    if lam is None or a != b.scale(lam):
        return None
    return lam


def _field_ratio(v: PolyVectorField, w: PolyVectorField) -> Optional[Fraction]:
    for wi in w.components:
        if wi:
            j = w.components.index(wi)
            lam = _ratio(v.components[j], wi)
            if lam is None or v != w.scale(lam):
                return None
            return lam
    return None


def quasi_homogeneous_certificate(eta: KForm, gamma: int, d: int) -> LocalCertificate:
    """Check the quasi-homogeneous structure of a local model at the origin.

    (i) ``i_S eta = 0``; (ii) ``L_S eta = m eta`` with ``m = 1 + gamma (1 + d)``;
    (iii) ``Z = rot3(d eta)`` has zero linear part; (iv) ``[S, Z] = l Z`` with
    an integer ``l >= 1``.  Any failure gives kind ``GKCandidate`` with the
    failing checks listed.
    """
    if eta.nvars != 3 or eta.k != 1:
        raise ValueError("local models are 1-forms in 3 variables")
    S = weighted_radial(gamma)
    origin = [0, 0, 0]
    failed = []
    if contract(S, eta):
        failed.append("i_S_eta")
    m = 1 + gamma * (1 + d)
    L = lie_derivative(S, eta)
    lie_ok = L == eta.scale(m)
    if not lie_ok:
        failed.append("lie_derivative")
    d_eta = exterior_derivative(eta)
    Zf = rot3(d_eta)
    DZ = [[Fraction(x) for x in row] for row in Zf.jacobian_at(origin)]
    if any(x != 0 for row in DZ for x in row):
        failed.append("DZ_null")
    ell = None
    br = lie_bracket(S, Zf)
    lam = _field_ratio(br, Zf) if not Zf.is_zero() else None
    if lam is not None and lam.denominator == 1 and lam >= 1:
        ell = int(lam)
    else:
        failed.append("bracket")
    d_eta_nonzero = any(c.evaluate(origin) != 0 for c in d_eta.coeffs.values())
    cert = LocalCertificate(tuple(Fraction(0) for _ in range(3)), "GKCandidate" if failed else "QuasiHomogeneous",
                            d_eta_nonzero, Zf, DZ, ell, m if lie_ok else None, failed)
    if not failed:
        cert.qh_type = (gamma, gamma, 1, ell)
        mu = KForm.volume3()
        cert.reconstruction_lambda = _form_ratio(eta, contract(S, contract(Zf, mu)))
    return cert


def fw_pullback(G: PlaneFoliation, gamma: int) -> KForm:
    """Pull back along the descent map ``(x0 : x1 : x2) -> (x0 : x1 : x2^gamma)``."""
    x0, x1, x2 = MultiPoly.variables(3)
    return pullback_form(G.omega, [x0, x1, x2 ** gamma])


def fw_weight_report(G: PlaneFoliation, gamma: int) -> Dict[str, object]:
    """Weighted degrees of the descent pull-back compared with ``d' = gamma (d + 1) + 1``.

    Weights are ``(gamma, gamma, 1)`` with ``dx_i`` carrying the weight of
    ``x_i``.  The raw pull-back carries the extra factor ``x2^(gamma - 1)``;
    after removing it the weight equals ``d'``.
    """
    form = fw_pullback(G, gamma)
    weights = form.weights([gamma, gamma, 1])
    x2 = MultiPoly.variable(2, 3)
    factor = x2 ** (gamma - 1)
    reduced = {}
    for idx, c in form.coeffs.items():
        q = divide_exact(c, factor)
        if q is None:
            reduced = None
            break
        reduced[idx] = q
    reduced_weights = None if reduced is None else KForm(3, 1, reduced).weights([gamma, gamma, 1])
    d_prime = gamma * (G.d + 1) + 1
    S = weighted_radial(gamma)
    return {
        "weights": sorted(weights),
        "reduced_weights": None if reduced_weights is None else sorted(reduced_weights),
        "d_prime": d_prime,
        "euler_ok": contract(S, form).is_zero(),
        "matches_d_prime": reduced_weights == {d_prime},
        "offset": (min(weights) - d_prime) if weights else None,
    }
