"""Small exact linear algebra over Q and 2x2 eigen-analysis helpers."""

from __future__ import annotations

import cmath
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import mpmath


def rank(rows: Sequence[Sequence]) -> int:
    """Exact rank of a rational matrix by Gaussian elimination."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(r + 1, len(m)):
            if m[i][c]:
                f = m[i][c] / m[r][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def nullspace(rows: Sequence[Sequence]) -> List[List[Fraction]]:
    """Basis of the right kernel of a rational matrix."""
    m = [[Fraction(x) for x in row] for row in rows]
    ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        lead = m[r][c]
        m[r] = [x / lead for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][free]
        basis.append(v)
    return basis


def is_hyperbolic_exact(J: Sequence[Sequence]) -> bool:
    """Nonreal eigenvalue ratio, decided by ``0 < tr^2/det < 4``."""
    tr = Fraction(J[0][0]) + Fraction(J[1][1])
    det = Fraction(J[0][0]) * Fraction(J[1][1]) - Fraction(J[0][1]) * Fraction(J[1][0])
    if det == 0:
        return False
    q = tr * tr / det
    return 0 < q < 4


def _rational_sqrt(x: Fraction) -> Optional[Fraction]:
    from math import isqrt

    if x < 0:
        return None
    n, d = isqrt(x.numerator), isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


def exact_eigenvalues(J: Sequence[Sequence]) -> Optional[Tuple[Fraction, Fraction]]:
    """Both eigenvalues when they are rational, else ``None``."""
    a, b, c, d = (Fraction(J[0][0]), Fraction(J[0][1]), Fraction(J[1][0]), Fraction(J[1][1]))
    disc = (a - d) ** 2 + 4 * b * c
    s = _rational_sqrt(disc)
    if s is None:
        return None
    return ((a + d + s) / 2, (a + d - s) / 2)


def _alignment(J, lam) -> float:
    """How close the eigenvector of ``lam`` is to the first coordinate axis."""
    a, b, c, d = J[0][0], J[0][1], J[1][0], J[1][1]
    # rows of J - lam I; pick the better conditioned one for the kernel
    r1 = (a - lam, b)
    r2 = (c, d - lam)
    row = r1 if abs(r1[0]) + abs(r1[1]) >= abs(r2[0]) + abs(r2[1]) else r2
    if abs(row[0]) + abs(row[1]) == 0:
        return 1.0  # scalar matrix: every vector is an eigenvector
    v = (row[1], -row[0])
    norm = (abs(v[0]) ** 2 + abs(v[1]) ** 2) ** 0.5
    return abs(v[0]) / norm


def ordered_eigenvalues(J, exact: bool = False):
    """Return ``(lam_plus, lam_minus)``.

    ``lam_plus`` is the eigenvalue whose eigenvector is closest to the first
    coordinate axis; ties go to the eigenvalue with larger imaginary part, then
    larger real part.
    """
    pair = exact_eigenvalues(J) if exact else None
    if pair is None:
        Jf = [[complex(x) for x in row] for row in J]
        tr = Jf[0][0] + Jf[1][1]
        det = Jf[0][0] * Jf[1][1] - Jf[0][1] * Jf[1][0]
        root = cmath.sqrt(tr * tr - 4 * det)
        pair = ((tr + root) / 2, (tr - root) / 2)
    else:
        Jf = J
    l1, l2 = pair
    a1, a2 = _alignment(Jf, l1), _alignment(Jf, l2)
    if abs(a1 - a2) > 1e-9:
        return (l1, l2) if a1 > a2 else (l2, l1)
    k1 = (complex(l1).imag, complex(l1).real)
    k2 = (complex(l2).imag, complex(l2).real)
    return (l1, l2) if k1 >= k2 else (l2, l1)


def hyperbolic_numeric(J: Sequence[Sequence], tol: float = 1e-8, dps: int = 50) -> bool:
    """Eigenvalue-ratio nonreality test with a high-precision eigensolver."""
    with mpmath.workdps(dps):
        M = mpmath.matrix([[mpmath.mpf(Fraction(x).numerator) / Fraction(x).denominator for x in row] for row in J])
        ev = mpmath.eig(M, left=False, right=False)
        l1, l2 = ev[0], ev[1]
        if l1 == 0 or l2 == 0:
            return False
        ratio = l1 / l2
        return abs(mpmath.im(ratio)) > tol
