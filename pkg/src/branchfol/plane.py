"""Foliations on P^2 with the invariant line Z = 0, and their singular points.

The family is parametrised by a pair ``(A, B)`` of degree-``d`` forms:
``omega = Z*A dX + Z*B dY + C dZ`` with ``C = -X*A - Y*B``.  Singular points
are located chart by chart.  In a chart the foliation is ``a du + b dv`` with
dual vector field ``(-b, a)``; its zeros are found by eliminating one variable
with a resultant, and multiplicities come from an exact squarefree
decomposition of that resultant.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import CommonFactor, DegreeMismatch, PointNotSingular, SolverNonConvergence, ZeroForm
from .foliation import ProjFoliation, affine_restriction
from .forms import KForm
from .gcd import divide_exact, resultant, squarefree_decomposition, univariate_coeffs
from .linalg import exact_eigenvalues, is_hyperbolic_exact, ordered_eigenvalues
from .poly import MultiPoly, random_homogeneous

X, Y, Z = MultiPoly.variables(3)


@dataclass(frozen=True)
class SingularPointReport:
    chart: int
    location: tuple  # affine chart coordinates, complex or Fraction
    projective: tuple
    multiplicity: int
    jacobian: tuple
    nondegenerate: bool
    hyperbolic: bool
    characteristic_ratio: Optional[complex] = None
    cs_index_plus: Optional[complex] = None
    cs_index_minus: Optional[complex] = None
    residual: float = 0.0
    exact: bool = False

    def to_json(self) -> dict:
        def pair(z):
            if z is None:
                return None
            z = complex(z)
            return [z.real, z.imag]

        loc = []
        for c in self.location:
            loc.extend(pair(c))
        return {
            "chart": self.chart,
            "location": loc,
            "multiplicity": self.multiplicity,
            "nondegenerate": self.nondegenerate,
            "hyperbolic": self.hyperbolic,
            "ratio": pair(self.characteristic_ratio),
            "cs_plus": pair(self.cs_index_plus),
            "residual": self.residual,
            "exact": self.exact,
        }


@dataclass(frozen=True)
class PlaneFoliation:
    d: int
    base: ProjFoliation
    invariant_line: Optional[MultiPoly] = None
    A: Optional[MultiPoly] = field(default=None, compare=False)
    B: Optional[MultiPoly] = field(default=None, compare=False)

    @classmethod
    def from_AB(cls, A: MultiPoly, B: MultiPoly) -> "PlaneFoliation":
        if A.nvars != 3 or B.nvars != 3:
            raise DegreeMismatch("A and B must be forms in X, Y, Z")
        if A.is_zero() and B.is_zero():
            raise ZeroForm("A = B = 0 gives the zero form")
        for name, p in (("A", A), ("B", B)):
            if p and not p.is_homogeneous():
                raise DegreeMismatch(f"{name} is not homogeneous")
        degs = {p.degree() for p in (A, B) if p}
        if len(degs) != 1:
            raise DegreeMismatch(f"deg A = {A.degree()} and deg B = {B.degree()} differ")
        (d,) = degs
        C = -(X * A) - Y * B
        omega = KForm.one_form([Z * A, Z * B, C])
        base = ProjFoliation.from_one_form(omega)
        if base.degree != d:
            raise CommonFactor(f"(A, B) share a factor with the line data; saturated degree {base.degree} != {d}")
        # keep A, B consistent with the normalised representative
        A = divide_exact(base.omega.coefficient((0,)), Z)
        B = divide_exact(base.omega.coefficient((1,)), Z)
        return cls(d, base, Z, A, B)

    @classmethod
    def from_foliation(cls, F: ProjFoliation) -> "PlaneFoliation":
        """Wrap any foliation on P^2; the line Z = 0 is recorded when invariant."""
        if F.n != 2:
            raise ValueError("plane foliations live on P^2")
        line = Z if F.invariant_hypersurface_check(Z) else None
        A = B = None
        if line is not None:
            A = divide_exact(F.omega.coefficient((0,)), Z)
            B = divide_exact(F.omega.coefficient((1,)), Z)
        return cls(F.degree, F, line, A, B)

    @property
    def omega(self) -> KForm:
        return self.base.omega

    @property
    def C(self) -> MultiPoly:
        return self.omega.coefficient((2,))

    def expected_singular_count(self) -> int:
        return self.d * self.d + self.d + 1

    def chart_field(self, chart: int) -> Tuple[MultiPoly, MultiPoly]:
        """``(a, b)`` with the chart restriction equal to ``a du + b dv``."""
        eta = affine_restriction(self.omega, chart)
        return eta.coefficient((0,)), eta.coefficient((1,))

    def singular_points(self, chart: Optional[int] = None, mode: str = "numeric", seed: int = 0,
                        tol_residual: float = 1e-10, tol_cluster: float = 1e-6) -> List[SingularPointReport]:
        return singular_points(self, chart, mode, seed, tol_residual, tol_cluster)

    def analyze_singularity(self, point: Sequence, chart: int = 2) -> SingularPointReport:
        return analyze_singularity(self, point, chart)


def _chart_embed(chart: int, loc: Sequence) -> tuple:
    loc = list(loc)
    return tuple(loc[:chart] + [1] + loc[chart:])


def _canonical_chart(proj: Sequence[complex]) -> int:
    mags = [abs(c) for c in proj]
    top = max(mags)
    return next(i for i, m in enumerate(mags) if m >= top * (1 - 1e-6))


def _jacobian(a: MultiPoly, b: MultiPoly):
    """Jacobian of the dual field ``(-b, a)`` as polynomial entries."""
    return [[-b.partial(0), -b.partial(1)], [a.partial(0), a.partial(1)]]


def _report(chart, loc, proj, mult, J, exact, residual) -> SingularPointReport:
    if exact:
        det = J[0][0] * J[1][1] - J[0][1] * J[1][0]
        nondeg = det != 0
    else:
        nondeg = mult == 1
    ratio = cs_plus = cs_minus = None
    hyperbolic = False
    if nondeg:
        lp, lm = ordered_eigenvalues(J, exact=exact)
        if exact and isinstance(lp, Fraction):
            ratio = lp / lm
            cs_plus, cs_minus = lm / lp, lp / lm
            hyperbolic = False
        else:
            lp, lm = complex(lp), complex(lm)
            ratio, cs_plus, cs_minus = lp / lm, lm / lp, lp / lm
            hyperbolic = is_hyperbolic_exact(J) if exact else abs(ratio.imag) > 1e-8
    return SingularPointReport(chart, tuple(loc), tuple(proj), mult, tuple(tuple(r) for r in J), nondeg,
                               hyperbolic, ratio, cs_plus, cs_minus, residual, exact)


def analyze_singularity(G: PlaneFoliation, point: Sequence, chart: int = 2) -> SingularPointReport:
    """Exact analysis at a rational zero of the chart vector field."""
    a, b = G.chart_field(chart)
    pt = [Fraction(x) for x in point]
    if len(pt) != 2:
        raise ValueError("chart points have two coordinates")
    if a.evaluate(pt) != 0 or b.evaluate(pt) != 0:
        raise PointNotSingular(f"({pt[0]}, {pt[1]}) is not a zero of the vector field in chart {chart}")
    J = [[Fraction(e.evaluate(pt)) for e in row] for row in _jacobian(a, b)]
    det = J[0][0] * J[1][1] - J[0][1] * J[1][0]
    return _report(chart, pt, _chart_embed(chart, pt), 1 if det else 0, J, True, 0.0)


# ---------------------------------------------------------------------------
# numeric solver
# ---------------------------------------------------------------------------

def _shear(p: MultiPoly, t: Fraction) -> MultiPoly:
    u, v = MultiPoly.variables(2)
    return p.compose([u + v.scale(t), v])


def _roots(coeffs: Sequence) -> np.ndarray:
    """Roots of a dense low-to-high coefficient list."""
    c = [x if isinstance(x, complex) else complex(float(x)) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    if len(c) <= 1:
        return np.array([], dtype=complex)
    return np.roots(c[::-1])


def _eval_uni(p: MultiPoly, u0: complex) -> List[complex]:
    """Coefficients in ``v`` of ``p(u0, v)``."""
    out = [0j] * (p.degree_in(1) + 1)
    for (i, j), c in p.terms.items():
        out[j] += float(c) * u0 ** i
    return out


def _newton(a: MultiPoly, b: MultiPoly, pt, steps: int = 20):
    J = [[a.partial(0), a.partial(1)], [b.partial(0), b.partial(1)]]
    x = np.array(pt, dtype=complex)
    for _ in range(steps):
        F = np.array([a.evaluate_float(x), b.evaluate_float(x)])
        M = np.array([[e.evaluate_float(x) for e in row] for row in J])
        try:
            step = np.linalg.solve(M, F)
        except np.linalg.LinAlgError:
            break
        x = x - step
        if np.max(np.abs(step)) < 1e-15 * max(1.0, np.max(np.abs(x))):
            break
    return x


def _residual(a, b, pt) -> float:
    return max(abs(a.evaluate_float(pt)), abs(b.evaluate_float(pt)))


class _ShearRetry(Exception):
    pass


def _chart_zeros(a: MultiPoly, b: MultiPoly, t: Fraction, tol_cluster: float):
    """Zeros of ``a = b = 0`` in C^2 as ``(point, multiplicity)`` pairs."""
    if a.is_zero() or b.is_zero():
        other = b if a.is_zero() else a
        if other.is_constant() and not other.is_zero():
            return []
        raise SolverNonConvergence("chart coefficients have a common curve of zeros", [])
    if a.is_constant() or b.is_constant():
        return []
    sa, sb = _shear(a, t), _shear(b, t)
    # lead coefficients in v must be constants so the resultant sees every zero
    for p in (sa, sb):
        top = p.degree_in(1)
        if any(e[1] == top and e[0] for e in p.terms):
            raise _ShearRetry()
    R = resultant(sa, sb, 1)
    if R.is_zero():
        raise SolverNonConvergence("chart coefficients share a factor", [])
    if R.is_constant():
        return []
    out = []
    for factor, mult in squarefree_decomposition(univariate_coeffs(R, 0)):
        for u0 in _roots(factor):
            ca, cb = _eval_uni(sa, u0), _eval_uni(sb, u0)
            cands = list(_roots(ca)) + list(_roots(cb))
            if not cands:
                raise _ShearRetry()
            scored = sorted(cands, key=lambda v: _residual(sa, sb, (u0, v)))
            best = scored[0]
            # a second, well separated common zero over u0 means the shear was not injective
            for v in scored[1:]:
                if abs(v - best) > 1e-3 and _residual(sa, sb, (u0, v)) < 1e-9:
                    raise _ShearRetry()
            pt = (u0, best)
            if mult == 1:
                pt = tuple(_newton(sa, sb, pt))
            out.append(((pt[0] + float(t) * pt[1], pt[1]), mult))
    return out


def singular_points(G: PlaneFoliation, chart: Optional[int] = None, mode: str = "numeric", seed: int = 0,
                    tol_residual: float = 1e-10, tol_cluster: float = 1e-6) -> List[SingularPointReport]:
    """Singular points of ``G``.

    With ``chart=None`` all three charts are scanned and every point is
    reported once, in the chart where its largest coordinate is 1.  With a
    chart index only the affine points of that chart are returned.  In
    ``exact`` mode points whose coordinates are recognisably rational are
    re-analysed with exact arithmetic.
    """
    if mode not in ("numeric", "exact"):
        raise ValueError(f"unknown mode {mode!r}")
    charts = [0, 1, 2] if chart is None else [chart]
    rng = random.Random(seed)
    reports: List[SingularPointReport] = []
    bad = []
    for c in charts:
        a, b = G.chart_field(c)
        for _attempt in range(20):
            t = Fraction(rng.randint(1, 97), rng.randint(1, 97)) * rng.choice((1, -1))
            try:
                zeros = _chart_zeros(a, b, t, tol_cluster)
                break
            except _ShearRetry:
                continue
        else:
            raise SolverNonConvergence(f"no admissible projection found in chart {c}", [])
        Jpoly = _jacobian(a, b)
        for pt, mult in zeros:
            proj = _chart_embed(c, pt)
            if chart is None and _canonical_chart(proj) != c:
                continue
            res = _residual(a, b, pt)
            if res > tol_residual:
                bad.append(res)
                continue
            report = None
            if mode == "exact":
                report = _try_exact(G, a, b, c, pt)
            if report is None:
                J = [[e.evaluate_float(pt) for e in row] for row in Jpoly]
                report = _report(c, pt, proj, mult, J, False, res)
            else:
                report = replace(report, multiplicity=mult)
            reports.append(report)
    if bad:
        raise SolverNonConvergence(f"{len(bad)} candidate zeros failed the residual test", bad)
    return _dedupe(reports, tol_cluster)


def _try_exact(G, a, b, chart, pt) -> Optional[SingularPointReport]:
    if any(abs(complex(z).imag) > 1e-9 for z in pt):
        return None
    guess = [Fraction(complex(z).real).limit_denominator(1000) for z in pt]
    if a.evaluate(guess) != 0 or b.evaluate(guess) != 0:
        return None
    return analyze_singularity(G, guess, chart)


def _normalized(proj) -> tuple:
    proj = [complex(z) for z in proj]
    k = _canonical_chart(proj)
    return tuple(z / proj[k] for z in proj)


def _dedupe(reports: List[SingularPointReport], tol: float) -> List[SingularPointReport]:
    kept: List[SingularPointReport] = []
    keys = []
    for r in reports:
        key = _normalized(r.projective)
        if any(max(abs(x - y) for x, y in zip(key, k)) < tol for k in keys):
            continue
        kept.append(r)
        keys.append(key)
    kept.sort(key=lambda r: (r.chart, [(round(complex(z).real, 9), round(complex(z).imag, 9)) for z in r.location]))
    return kept


def total_multiplicity(reports: Sequence[SingularPointReport]) -> int:
    return sum(r.multiplicity for r in reports)


def random_plane_foliation(d: int, seed: int, coeff_range: int = 5) -> PlaneFoliation:
    """Deterministic seeded ``(A, B)`` pair of degree ``d`` with small integer coefficients."""
    if d < 1:
        raise ValueError("degree must be at least 1")
    rng = random.Random(seed)
    while True:
        A = random_homogeneous(3, d, rng, coeff_range)
        B = random_homogeneous(3, d, rng, coeff_range)
        try:
            return PlaneFoliation.from_AB(A, B)
        except (CommonFactor, DegreeMismatch, ZeroForm):
            continue


def three_line_foliation(a: MultiPoly, b: MultiPoly) -> PlaneFoliation:
    """``YZ a dX + XZ b dY + XY c dZ`` with ``c = -a - b``; leaves XYZ = 0 invariant."""
    c = -a - b
    if a.is_zero() and b.is_zero():
        raise ZeroForm("a = b = 0 gives the zero form")
    degs = {p.degree() for p in (a, b, c) if p}
    if len(degs) != 1 or not all(p.is_homogeneous() for p in (a, b, c) if p):
        raise DegreeMismatch("a and b must be homogeneous of one degree")
    (k,) = degs
    F = ProjFoliation.from_one_form(KForm.one_form([Y * Z * a, X * Z * b, X * Y * c]))
    if F.degree != k + 1:
        raise CommonFactor(f"the form is not saturated: degree {F.degree} != {k + 1}")
    return PlaneFoliation.from_foliation(F)


def random_three_line_foliation(d: int, seed: int, coeff_range: int = 5) -> PlaneFoliation:
    """Seeded degree-``d`` foliation with the invariant lines X, Y, Z."""
    if d < 1:
        raise ValueError("degree must be at least 1")
    rng = random.Random(seed)
    while True:
        a = random_homogeneous(3, d - 1, rng, coeff_range)
        b = random_homogeneous(3, d - 1, rng, coeff_range)
        try:
            return three_line_foliation(a, b)
        except (CommonFactor, DegreeMismatch, ZeroForm):
            continue
