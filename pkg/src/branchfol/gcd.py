"""Exact division, gcd, resultants and determinants for :class:`MultiPoly`.

The gcd pipeline for two nonzero polynomials:

1. split off the monomial content;
2. try a modular certificate of coprimality (rigorous, see
   :func:`coprime_certificate`);
3. dehomogenize when both inputs are homogeneous;
4. heuristic gcd (evaluation at a large integer and balanced digit
   reconstruction, confirmed by trial division);
5. recursive content / primitive part with a subresultant PRS as fallback.

Every returned gcd is confirmed by exact division, so the fast paths can only
cost time, never correctness.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import reduce
from math import gcd as igcd, isqrt
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import ArityError
from .poly import MultiPoly, Scalar, _Heap, grevlex_key

MODULUS = (1 << 61) - 1


# ---------------------------------------------------------------------------
# division
# ---------------------------------------------------------------------------

def _div_scalar(a: Scalar, b: Scalar) -> Scalar:
    if isinstance(a, int) and isinstance(b, int) and a % b == 0:
        return a // b
    q = Fraction(a) / b
    return q.numerator if q.denominator == 1 else q


def divmod_poly(p: MultiPoly, q: MultiPoly) -> Tuple[MultiPoly, MultiPoly]:
    """Multivariate division by a single divisor in grevlex order.

    For one divisor the remainder is zero exactly when ``q`` divides ``p``.
    """
    if p.nvars != q.nvars:
        raise ArityError("variable-count mismatch in division")
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    lt_e, lt_c = q.leading_term()
    rest = [(e, c) for e, c in q.terms.items() if e != lt_e]
    rem = dict(p.terms)
    heap = _Heap(rem)
    quot: Dict[tuple, Scalar] = {}
    final: Dict[tuple, Scalar] = {}
    while True:
        e = heap.pop()
        if e is None:
            break
        c = rem.pop(e, 0)
        if not c:
            continue
        if any(a < b for a, b in zip(e, lt_e)):
            final[e] = c
            continue
        m = tuple(a - b for a, b in zip(e, lt_e))
        qc = _div_scalar(c, lt_c)
        quot[m] = qc
        for e2, c2 in rest:
            k = tuple(a + b for a, b in zip(m, e2))
            v = rem.get(k, 0) - qc * c2
            if v:
                rem[k] = v
                heap.push(k)
            else:
                rem.pop(k, None)
    return MultiPoly(p.nvars, quot, _trusted=True), MultiPoly(p.nvars, final, _trusted=True)


def divide_exact(p: MultiPoly, q: MultiPoly) -> Optional[MultiPoly]:
    """Return ``p / q`` if ``q`` divides ``p`` exactly, else ``None``."""
    if p.nvars != q.nvars:
        raise ArityError("variable-count mismatch in division")
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero():
        return p
    if q.is_constant():
        return p.scale(Fraction(1) / q.constant_term())
    for i in range(p.nvars):
        if p.degree_in(i) < q.degree_in(i):
            return None
    lt_e, lt_c = q.leading_term()
    rest = [(e, c) for e, c in q.terms.items() if e != lt_e]
    rem = dict(p.terms)
    heap = _Heap(rem)
    quot: Dict[tuple, Scalar] = {}
    while True:
        e = heap.pop()
        if e is None:
            break
        c = rem.pop(e, 0)
        if not c:
            continue
        if any(a < b for a, b in zip(e, lt_e)):
            return None
        m = tuple(a - b for a, b in zip(e, lt_e))
        qc = _div_scalar(c, lt_c)
        quot[m] = qc
        for e2, c2 in rest:
            k = tuple(a + b for a, b in zip(m, e2))
            v = rem.get(k, 0) - qc * c2
            if v:
                rem[k] = v
                heap.push(k)
            else:
                rem.pop(k, None)
    return MultiPoly(p.nvars, quot, _trusted=True)


def divides(q: MultiPoly, p: MultiPoly) -> bool:
    return divide_exact(p, q) is not None


# ---------------------------------------------------------------------------
# univariate helpers over a polynomial coefficient ring
# ---------------------------------------------------------------------------

def to_univariate(p: MultiPoly, v: int) -> List[MultiPoly]:
    """Coefficients of ``p`` as a polynomial in variable ``v`` (low to high)."""
    deg = p.degree_in(v)
    buckets: List[Dict[tuple, Scalar]] = [dict() for _ in range(max(deg + 1, 0))]
    for e, c in p.terms.items():
        buckets[e[v]][e[:v] + (0,) + e[v + 1:]] = c
    return [MultiPoly(p.nvars, b, _trusted=True) for b in buckets]


def from_univariate(coeffs: Sequence[MultiPoly], v: int, nvars: int) -> MultiPoly:
    out: Dict[tuple, Scalar] = {}
    for k, c in enumerate(coeffs):
        for e, val in c.terms.items():
            out[e[:v] + (k,) + e[v + 1:]] = val
    return MultiPoly(nvars, out, _trusted=True)


def _trim(u: List[MultiPoly]) -> List[MultiPoly]:
    while u and u[-1].is_zero():
        u.pop()
    return u


def _prem(a: List[MultiPoly], b: List[MultiPoly], v: int, nvars: int) -> List[MultiPoly]:
    """Pseudo-remainder of ``a`` by ``b`` in the univariate view."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    steps = len(a) - len(b) + 1
    for _ in range(steps):
        _trim(r)
        if len(r) - 1 < db:
            r = [c * lb for c in r]
            continue
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [c * lb for c in r]
        for i, bc in enumerate(b):
            r[i + shift] = r[i + shift] - lr * bc
        r.pop()
    return _trim(r)


def subresultant_prs(a: List[MultiPoly], b: List[MultiPoly], v: int, nvars: int) -> List[List[MultiPoly]]:
    """Subresultant polynomial remainder sequence of two univariate views."""
    if len(a) < len(b):
        a, b = b, a
    seq = [a, b]
    d = len(a) - len(b)
    beta = MultiPoly.constant((-1) ** (d + 1), nvars)
    psi = MultiPoly.constant(-1, nvars)
    while True:
        r = _prem(a, b, v, nvars)
        if not r:
            break
        r = [divide_exact(c, beta) for c in r]
        seq.append(r)
        gam = b[-1]
        if d >= 1:
            psi = divide_exact((-gam) ** d, psi ** (d - 1))
        a, b = b, r
        d = len(a) - len(b)
        beta = -gam * psi ** d
    return seq


def _content_v(p: MultiPoly, v: int) -> MultiPoly:
    return content_gcd([c for c in to_univariate(p, v) if c])


def _prs_gcd(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    used = set(p.variables_used()) | set(q.variables_used())
    if not used:
        return MultiPoly.constant(1, p.nvars)
    v = max(used)
    if p.degree_in(v) <= 0 or q.degree_in(v) <= 0:
        if p.degree_in(v) > 0:
            p = _content_v(p, v)
        if q.degree_in(v) > 0:
            q = _content_v(q, v)
        return gcd(p, q)
    cp, cq = _content_v(p, v), _content_v(q, v)
    pp, qq = divide_exact(p, cp), divide_exact(q, cq)
    c = gcd(cp, cq)
    seq = subresultant_prs(to_univariate(pp, v), to_univariate(qq, v), v, p.nvars)
    last = seq[-1]
    if len(last) == 1:
        g = MultiPoly.constant(1, p.nvars)
    else:
        g = from_univariate(last, v, p.nvars)
        g = divide_exact(g, _content_v(g, v))
    return (c * g).monic()


# ---------------------------------------------------------------------------
# heuristic gcd over the integers
# ---------------------------------------------------------------------------

def _max_norm(p: MultiPoly) -> int:
    return max(abs(int(c)) for c in p.terms.values())


def _balanced_lift(h: MultiPoly, xi: int, v: int) -> MultiPoly:
    out: Dict[tuple, int] = {}
    half = xi // 2
    for e, c in h.terms.items():
        c = int(c)
        k = 0
        while c:
            r = c % xi
            if r > half:
                r -= xi
            if r:
                out[e[:v] + (k,) + e[v + 1:]] = r
            c = (c - r) // xi
            k += 1
    return MultiPoly(h.nvars, out, _trusted=True)


def _int_primitive(p: MultiPoly) -> MultiPoly:
    g = reduce(igcd, (int(c) for c in p.terms.values()), 0)
    if p.leading_coefficient() < 0:
        g = -g
    return MultiPoly(p.nvars, {e: int(c) // g for e, c in p.terms.items()}, _trusted=True)


def _heugcd(f: MultiPoly, g: MultiPoly, depth: int = 0) -> Optional[MultiPoly]:
    """Integer gcd (up to sign) of integer polynomials, or ``None`` on failure."""
    used = set(f.variables_used()) | set(g.variables_used())
    if not used:
        return MultiPoly.constant(igcd(int(f.constant_term()), int(g.constant_term())), f.nvars)
    v = max(used)
    bound = 2 * min(_max_norm(f), _max_norm(g)) + 29
    xi = max(bound, 2)
    for _ in range(6):
        ff = f.substitute({v: xi})
        gg = g.substitute({v: xi})
        if ff and gg:
            h = _heugcd(ff, gg, depth + 1)
            if h is not None:
                cand = _balanced_lift(h, xi, v)
                if cand:
                    cand = _int_primitive(cand)
                    if divide_exact(f, cand) is not None and divide_exact(g, cand) is not None:
                        return cand
        xi = xi * 73794 * isqrt(isqrt(xi) + 1) // 27011 + 1
    return None


# ---------------------------------------------------------------------------
# coprimality certificate
# ---------------------------------------------------------------------------

def _uni_mod(p: MultiPoly, v: int, point: Sequence[int], prime: int) -> List[int]:
    deg = p.degree_in(v)
    out = [0] * (deg + 1)
    for e, c in p.terms.items():
        val = int(c) % prime
        for i, (x, k) in enumerate(zip(point, e)):
            if i != v and k:
                val = val * pow(x, k, prime) % prime
        out[e[v]] = (out[e[v]] + val) % prime
    return out


def _uni_gcd_mod(a: List[int], b: List[int], prime: int) -> int:
    """Degree of the gcd of two dense univariate polynomials mod ``prime``."""
    def trim(u):
        while u and u[-1] == 0:
            u.pop()
        return u

    a, b = trim(list(a)), trim(list(b))
    while b:
        inv = pow(b[-1], -1, prime)
        while len(a) >= len(b):
            if a[-1]:
                f = a[-1] * inv % prime
                shift = len(a) - len(b)
                for i, bc in enumerate(b):
                    a[i + shift] = (a[i + shift] - f * bc) % prime
            a.pop()
            trim(a)
        a, b = b, a
    return len(a) - 1


def coprime_certificate(p: MultiPoly, q: MultiPoly, seed: int = 0, tries: int = 3) -> bool:
    """Prove ``gcd(p, q)`` is constant via specialisations mod a prime.

    ``p`` and ``q`` must have integer coefficients.  For each variable the other
    variables are fixed at random residues; when the leading coefficient in that
    variable survives, the univariate gcd degree bounds the true gcd's degree in
    that variable.  A ``True`` answer is a proof; ``False`` means "not proven".
    """
    rng = random.Random(seed)
    pv, qv = set(p.variables_used()), set(q.variables_used())
    for v in sorted(pv & qv):
        dp, dq = p.degree_in(v), q.degree_in(v)
        for _ in range(tries):
            point = [rng.randrange(1, MODULUS) for _ in range(p.nvars)]
            up = _uni_mod(p, v, point, MODULUS)
            uq = _uni_mod(q, v, point, MODULUS)
            if up[dp] and uq[dq]:
                if _uni_gcd_mod(up, uq, MODULUS) == 0:
                    break
                return False
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# public gcd
# ---------------------------------------------------------------------------

def _monomial_content(p: MultiPoly) -> Tuple[int, ...]:
    exps = iter(p.terms)
    m = list(next(exps))
    for e in exps:
        m = [min(a, b) for a, b in zip(m, e)]
    return tuple(m)


def _shift(p: MultiPoly, m: Sequence[int]) -> MultiPoly:
    return MultiPoly(p.nvars, {tuple(a - b for a, b in zip(e, m)): c for e, c in p.terms.items()}, _trusted=True)


def _gcd_primitive(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """gcd of integer-primitive polynomials free of monomial factors."""
    if coprime_certificate(p, q):
        return MultiPoly.constant(1, p.nvars)
    if p.is_homogeneous() and q.is_homogeneous():
        common = sorted(set(p.variables_used()) & set(q.variables_used()))
        if common:
            j = common[-1]
            hp, hq = p.substitute({j: 1}), q.substitute({j: 1})
            g = _gcd_primitive(*(MultiPoly.integer_primitive(x)[1] for x in (hp, hq)))
            return g.homogenize(j)
    g = _heugcd(p, q)
    if g is None:
        g = _prs_gcd(p, q)
    return g


def gcd(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """Monic greatest common divisor of two polynomials."""
    if p.nvars != q.nvars:
        raise ArityError("variable-count mismatch in gcd")
    if p.is_zero():
        return q.monic()
    if q.is_zero():
        return p.monic()
    mp, mq = _monomial_content(p), _monomial_content(q)
    m = tuple(min(a, b) for a, b in zip(mp, mq))
    mono = MultiPoly(p.nvars, {m: 1}, _trusted=True)
    pp, qq = _shift(p, mp), _shift(q, mq)
    if pp.is_constant() or qq.is_constant():
        return mono
    _, pp = pp.integer_primitive()
    _, qq = qq.integer_primitive()
    g = _gcd_primitive(pp, qq)
    return (g * mono).monic()


def content_gcd(polys: Sequence[MultiPoly]) -> MultiPoly:
    """Monic gcd of a nonempty list; the gcd of all-zero inputs is zero."""
    if not polys:
        raise ValueError("content_gcd of an empty list")
    nvars = polys[0].nvars
    if any(p.nvars != nvars for p in polys):
        raise ArityError("variable-count mismatch in content_gcd")
    nonzero = sorted((p for p in polys if p), key=lambda p: (len(p.terms), p.degree()))
    if not nonzero:
        return MultiPoly.zero(nvars)
    g = nonzero[0].monic()
    for p in nonzero[1:]:
        if g.is_constant():
            break
        q = divide_exact(p, g)
        if q is not None:
            continue
        g = gcd(g, p)
    return g


# ---------------------------------------------------------------------------
# determinants and resultants
# ---------------------------------------------------------------------------

def determinant(matrix: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Fraction-free (Bareiss) determinant of a square polynomial matrix."""
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    nvars = matrix[0][0].nvars
    m = [list(row) for row in matrix]
    if any(len(row) != n for row in m):
        raise ValueError("matrix is not square")
    sign = 1
    prev = MultiPoly.constant(1, nvars)
    for k in range(n - 1):
        if m[k][k].is_zero():
            for r in range(k + 1, n):
                if m[r][k]:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return MultiPoly.zero(nvars)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = divide_exact(num, prev)
            m[i][k] = MultiPoly.zero(nvars)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


def sylvester_matrix(p: MultiPoly, q: MultiPoly, v: int) -> List[List[MultiPoly]]:
    a, b = to_univariate(p, v), to_univariate(q, v)
    da, db = len(a) - 1, len(b) - 1
    size = da + db
    zero = MultiPoly.zero(p.nvars)
    rows = []
    for i in range(db):
        row = [zero] * size
        for k, c in enumerate(reversed(a)):
            row[i + k] = c
        rows.append(row)
    for i in range(da):
        row = [zero] * size
        for k, c in enumerate(reversed(b)):
            row[i + k] = c
        rows.append(row)
    return rows


def resultant(p: MultiPoly, q: MultiPoly, v: int) -> MultiPoly:
    """Resultant with respect to variable ``v`` (result does not involve ``v``)."""
    if p.nvars != q.nvars:
        raise ArityError("variable-count mismatch in resultant")
    if p.is_zero() or q.is_zero():
        return MultiPoly.zero(p.nvars)
    da, db = p.degree_in(v), q.degree_in(v)
    if da == 0:
        return p ** db
    if db == 0:
        return q ** da
    return determinant(sylvester_matrix(p, q, v))


# ---------------------------------------------------------------------------
# dense univariate polynomials over Q (low to high)
# ---------------------------------------------------------------------------

def _utrim(u):
    u = list(u)
    while u and u[-1] == 0:
        u.pop()
    return u


def udivmod(a, b):
    a, b = _utrim(a), _utrim(b)
    if not b:
        raise ZeroDivisionError("univariate division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    r = [Fraction(x) for x in a]
    while len(r) >= len(b) and r:
        f = r[-1] / Fraction(b[-1])
        shift = len(r) - len(b)
        q[shift] = f
        for i, bc in enumerate(b):
            r[i + shift] -= f * bc
        r = _utrim(r)
    return _utrim(q), r


def ugcd(a, b):
    a, b = _utrim(a), _utrim(b)
    while b:
        a, b = b, udivmod(a, b)[1]
    if not a:
        return []
    lead = Fraction(a[-1])
    return [Fraction(x) / lead for x in a]


def uderiv(a):
    return _utrim([k * c for k, c in enumerate(a)][1:])


def squarefree_decomposition(a) -> List[Tuple[list, int]]:
    """Yun's algorithm: list of (squarefree factor, multiplicity)."""
    a = _utrim(a)
    if len(a) <= 1:
        return []
    lead = Fraction(a[-1])
    a = [Fraction(x) / lead for x in a]
    out = []
    b = uderiv(a)
    c = ugcd(a, b)
    w = udivmod(a, c)[0]
    y = udivmod(b, c)[0]
    z = [yi - wi for yi, wi in _pad(y, uderiv(w))]
    i = 1
    while len(w) > 1:
        g = ugcd(w, z)
        if len(g) > 1:
            out.append((g, i))
        w = udivmod(w, g)[0]
        y = udivmod(z, g)[0]
        z = [yi - wi for yi, wi in _pad(y, uderiv(w))]
        i += 1
    return out


def _pad(a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return list(zip(a, b))


def univariate_coeffs(p: MultiPoly, v: int) -> List[Scalar]:
    """Dense coefficient list of a polynomial involving only variable ``v``."""
    if any(e[i] for e in p.terms for i in range(p.nvars) if i != v):
        raise ValueError("polynomial involves more than one variable")
    out = [0] * (p.degree_in(v) + 1)
    for e, c in p.terms.items():
        out[e[v]] = c
    return out
