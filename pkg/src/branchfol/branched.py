"""Branched rational maps ``f = (F0^alpha : F1^alpha : F2^gamma)`` from P^n to P^2."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import (BadExponents, CertificationInconclusive, CommonFactor, DegreeMismatch,
                     DegreeRelationViolated, PointNotOnLocus)
from .gcd import content_gcd, determinant, resultant, squarefree_decomposition, univariate_coeffs
from .groebner import buchberger
from .linalg import rank
from .poly import MultiPoly, random_homogeneous


@dataclass(frozen=True)
class BranchedMap:
    n: int
    nu: int
    alpha: int
    gamma: int
    F0: MultiPoly
    F1: MultiPoly
    F2: MultiPoly

    @classmethod
    def create(cls, F0: MultiPoly, F1: MultiPoly, F2: MultiPoly, alpha: int, gamma: int,
               nu: Optional[int] = None) -> "BranchedMap":
        """Build and validate; ``nu`` defaults to ``alpha * deg F0``."""
        if nu is None:
            nu = alpha * F0.degree() if F0 else 0
        m = cls(F0.nvars - 1, nu, alpha, gamma, F0, F1, F2)
        return m.validate()

    @property
    def nvars(self) -> int:
        return self.n + 1

    @property
    def beta(self) -> int:
        return self.alpha

    @property
    def components(self) -> List[MultiPoly]:
        return [self.F0, self.F1, self.F2]

    def validate(self) -> "BranchedMap":
        if self.alpha < 1 or self.gamma < 2 or self.nu < 2:
            raise BadExponents(f"need alpha >= 1, gamma >= 2, nu >= 2; got alpha={self.alpha}, "
                               f"gamma={self.gamma}, nu={self.nu}")
        for i, F in enumerate(self.components):
            if F.nvars != self.nvars:
                raise DegreeMismatch(f"F{i} has {F.nvars} variables, expected {self.nvars}")
            if F.is_zero() or not F.is_homogeneous():
                raise DegreeMismatch(f"F{i} must be a nonzero homogeneous polynomial")
        d0, d1, d2 = (F.degree() for F in self.components)
        if not (d0 * self.alpha == d1 * self.alpha == d2 * self.gamma == self.nu):
            raise DegreeRelationViolated(
                f"deg F0*alpha = {d0 * self.alpha}, deg F1*alpha = {d1 * self.alpha}, "
                f"deg F2*gamma = {d2 * self.gamma}, nu = {self.nu}")
        # pairwise: a factor shared by two components already makes I(f) non-isolated
        for i, j in ((0, 1), (0, 2), (1, 2)):
            g = content_gcd([self.components[i], self.components[j]])
            if not g.is_constant():
                raise CommonFactor(f"F{i} and F{j} share the factor {g}")
        return self

    def lifted(self) -> List[MultiPoly]:
        """The homogeneous lift ``(F0^alpha, F1^alpha, F2^gamma)``."""
        return [self.F0 ** self.alpha, self.F1 ** self.alpha, self.F2 ** self.gamma]

    def evaluate(self, point: Sequence) -> List:
        return [F.evaluate(point) for F in self.lifted()]

    def indeterminacy_ideal(self) -> List[MultiPoly]:
        return list(self.components)

    def degree_product(self) -> int:
        return self.F0.degree() * self.F1.degree() * self.F2.degree()

    def bezout_count(self) -> Fraction:
        """Predicted number of distinct points of I(f) when n = 3."""
        if self.n != 3:
            raise ValueError("the point count of I(f) is defined for n = 3")
        return Fraction(self.nu ** 3, self.alpha ** 2 * self.gamma)

    def scheme_length(self) -> int:
        """Length of the scheme cut out by the lifted components (each point counted ``alpha^2 gamma`` times)."""
        if self.n != 3:
            raise ValueError("the point count of I(f) is defined for n = 3")
        return self.nu ** 3

    def gradient_matrix(self) -> List[List[MultiPoly]]:
        """The 3 x (n+1) matrix N of gradients of F0, F1, F2."""
        return [F.gradient() for F in self.components]

    def jacobian_at(self, point: Sequence) -> List[List[Fraction]]:
        return [[g.evaluate(point) for g in row] for row in self.gradient_matrix()]

    def critical_components(self) -> Dict[str, object]:
        N = self.gradient_matrix()
        minors = []
        for cols in itertools.combinations(range(self.nvars), 3):
            minors.append(determinant([[row[c] for c in cols] for row in N]))
        X2 = (self.F0 ** (self.alpha - 1)) * (self.F1 ** (self.alpha - 1)) * (self.F2 ** (self.gamma - 1))
        return {"X1_generators": minors, "X2_poly": X2}

    def genericity_check(self, points: Sequence[Sequence] = (), certify: bool = False, count: bool = False,
                         max_degree: Optional[int] = None, max_pairs: int = 5000) -> "GenericityCertificate":
        return genericity_check(self, points, certify, count, max_degree, max_pairs)

    def weighted_factorization(self) -> Dict[str, object]:
        return weighted_factorization(self)


@dataclass
class PointCheck:
    coords: Tuple[Fraction, ...]
    on_locus: bool
    rank3: bool


@dataclass
class GenericityCertificate:
    checked_points: List[PointCheck]
    bezout_expected: Optional[Fraction]
    bezout_found: Union[int, str] = "not-counted"
    gold_standard: Optional[bool] = None
    numeric_points: List[Tuple[complex, ...]] = field(default_factory=list)

    @property
    def jacobian_full_rank(self) -> List[bool]:
        return [p.rank3 for p in self.checked_points]

    @property
    def passed(self) -> bool:
        return all(self.jacobian_full_rank) and self.gold_standard is not False

    def to_json(self) -> dict:
        exp = self.bezout_expected
        return {
            "points": [{"coords": [str(c) for c in p.coords], "on_locus": p.on_locus, "rank3": p.rank3}
                       for p in self.checked_points],
            "bezout": {"expected": None if exp is None else (int(exp) if exp.denominator == 1 else str(exp)),
                       "found": self.bezout_found},
            "gold_standard": self.gold_standard,
        }


def genericity_check(f: BranchedMap, points: Sequence[Sequence] = (), certify: bool = False, count: bool = False,
                     max_degree: Optional[int] = None, max_pairs: int = 5000) -> GenericityCertificate:
    """Exact rank-3 test of N at supplied points of I(f), plus optional certification.

    With ``certify`` the ideal generated by F0, F1, F2 and all 3x3 minors of N
    is run through Buchberger; ``gold_standard`` is True when it has no
    projective zero, False when a complete basis shows otherwise.
    """
    checks = []
    for pt in points:
        pt = tuple(Fraction(x) for x in pt)
        if len(pt) != f.nvars:
            raise DegreeMismatch(f"point has {len(pt)} coordinates, expected {f.nvars}")
        if all(x == 0 for x in pt):
            raise PointNotOnLocus("the origin is not a projective point")
        on = all(F.evaluate(pt) == 0 for F in f.components)
        if not on:
            raise PointNotOnLocus(f"{pt} does not lie on F0 = F1 = F2 = 0")
        checks.append(PointCheck(pt, True, rank(f.jacobian_at(pt)) == 3))
    cert = GenericityCertificate(checks, f.bezout_count() if f.n == 3 else None)
    if count and f.n == 3:
        found = indeterminacy_points_numeric(f)
        cert.numeric_points = found
        cert.bezout_found = len(found)
    if certify:
        gens = f.components + f.critical_components()["X1_generators"]
        run = buchberger(gens, max_degree=max_degree, max_pairs=max_pairs)
        if run.zero_dimensional:
            cert.gold_standard = True
        elif run.complete:
            cert.gold_standard = False
        else:
            raise CertificationInconclusive(
                f"Buchberger stopped after {run.pairs_processed} S-pairs without a decision")
    return cert


def weighted_factorization(f: BranchedMap) -> Dict[str, object]:
    """``f = fw o fbar`` with ``fbar = (F0, F1, F2)`` into P^2[gamma, gamma, 1]."""
    if f.alpha != 1:
        raise BadExponents("the weighted factorization is implemented for alpha = 1")
    x0, x1, x2 = MultiPoly.variables(3)
    fw = [x0, x1, x2 ** f.gamma]
    fbar = list(f.components)
    composed = [p.compose(fbar) for p in fw]
    if composed != f.lifted():
        raise AssertionError("fw o fbar does not reproduce the map")
    return {"fbar": fbar, "fw": fw, "weights": (f.gamma, f.gamma, 1), "composition_ok": True}


# ---------------------------------------------------------------------------
# numeric enumeration of I(f) for n = 3
# ---------------------------------------------------------------------------

def _roots(coeffs) -> List[complex]:
    c = [complex(x) if isinstance(x, complex) else complex(float(x)) for x in coeffs]
    while c and abs(c[-1]) == 0:
        c.pop()
    if len(c) <= 1:
        return []
    return list(np.roots(c[::-1]))


def _eval_partial(p: MultiPoly, fixed: Sequence[complex], var: int) -> List[complex]:
    """Coefficients in ``x_var`` after fixing the leading coordinates."""
    out = [0j] * (p.degree_in(var) + 1)
    for e, c in p.terms.items():
        v = complex(float(c))
        for x, k in zip(fixed, e):
            if k:
                v *= x ** k
        out[e[var]] += v
    return out


def _newton_system(polys: Sequence[MultiPoly], x0, steps: int = 30):
    J = [p.gradient() for p in polys]
    x = np.array(x0, dtype=complex)
    for _ in range(steps):
        F = np.array([p.evaluate_float(x) for p in polys])
        M = np.array([[g.evaluate_float(x) for g in row] for row in J])
        try:
            step = np.linalg.lstsq(M, F, rcond=None)[0]
        except np.linalg.LinAlgError:
            break
        x = x - step
        if np.max(np.abs(step)) < 1e-16 * max(1.0, np.max(np.abs(x))):
            break
    return x


def indeterminacy_points_numeric(f: BranchedMap, seed: int = 0, tol_residual: float = 1e-10,
                                 tol_cluster: float = 1e-6, attempts: int = 5) -> List[Tuple[complex, ...]]:
    """Distinct points of F0 = F1 = F2 = 0 in P^3, by iterated resultants.

    A seeded random rational change of coordinates puts every point in the
    affine chart ``w3 = 1`` and makes the projections generic.  Candidates
    obtained by back-substitution are polished by Newton's method and kept
    only when the residual of the original system (at the point scaled to
    unit max-norm) is below ``tol_residual``.
    """
    if f.n != 3:
        raise ValueError("numeric enumeration of I(f) is implemented for n = 3")
    rng = random.Random(seed)
    for _ in range(attempts):
        T = [[Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(4)] for _ in range(4)]
        if rank(T) < 4:
            continue
        w = MultiPoly.variables(3)
        one = MultiPoly.constant(1, 3)
        subs = [sum((w[j].scale(T[i][j]) for j in range(3)), one.scale(T[i][3])) for i in range(4)]
        G = [F.compose(subs) for F in f.components]
        if any(g.is_constant() for g in G):
            continue
        R01 = resultant(G[0], G[1], 2)
        R02 = resultant(G[0], G[2], 2)
        R = resultant(R01, R02, 1)
        if R.is_zero() or R01.is_zero() or R02.is_zero():
            continue
        cands = []
        for factor, _mult in squarefree_decomposition(univariate_coeffs(R, 0)):
            for a in _roots(factor):
                bs = _roots(_eval_partial(R02, [a], 1)) + _roots(_eval_partial(R01, [a], 1))
                for b in bs:
                    for c in _roots(_eval_partial(G[2], [a, b], 2)) + _roots(_eval_partial(G[0], [a, b], 2)):
                        cands.append((a, b, c))
        pts = []
        Tf = np.array([[float(x) for x in row] for row in T])
        for cand in cands:
            if max(abs(g.evaluate_float(cand)) for g in G) > 1e-3:
                continue
            x = _newton_system(G, cand)
            z = Tf @ np.array([x[0], x[1], x[2], 1.0])
            mags = np.abs(z)
            k = int(np.nonzero(mags >= mags.max() * (1 - 1e-6))[0][0])
            z = z / z[k]
            res = max(abs(F.evaluate_float(z)) for F in f.components)
            if res > tol_residual:
                continue
            if any(np.max(np.abs(z - q)) < tol_cluster for q in pts):
                continue
            pts.append(z)
        return [tuple(complex(c) for c in p) for p in pts]
    raise ValueError("could not find an admissible coordinate change")


def rational_point(z: Sequence[complex], f: BranchedMap, max_den: int = 1000) -> Optional[Tuple[Fraction, ...]]:
    """Exact rational representative of a numeric point of I(f), if there is one."""
    if any(abs(complex(c).imag) > 1e-9 for c in z):
        return None
    pt = tuple(Fraction(complex(c).real).limit_denominator(max_den) for c in z)
    if all(F.evaluate(pt) == 0 for F in f.components):
        return pt
    return None


def random_branched_map(n: int, nu: int, alpha: int, gamma: int, seed: int, coeff_range: int = 3,
                        density: float = 1.0) -> BranchedMap:
    if nu % alpha or nu % gamma:
        raise DegreeRelationViolated(f"nu = {nu} must be divisible by alpha = {alpha} and gamma = {gamma}")
    rng = random.Random(seed)
    while True:
        F0 = random_homogeneous(n + 1, nu // alpha, rng, coeff_range, density)
        F1 = random_homogeneous(n + 1, nu // alpha, rng, coeff_range, density)
        F2 = random_homogeneous(n + 1, nu // gamma, rng, coeff_range, density)
        try:
            return BranchedMap.create(F0, F1, F2, alpha, gamma, nu)
        except (CommonFactor, DegreeMismatch):
            continue
