"""A small Buchberger implementation (grevlex) with explicit resource caps.

It is only used to certify that a homogeneous ideal has no projective zeros:
once the leading monomials of elements of the ideal include a pure power of
every variable, the quotient by the leading-term ideal is finite dimensional,
so the affine variety is finite and, by homogeneity, equal to ``{0}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .poly import MultiPoly, grevlex_key


def _lm(p: MultiPoly) -> tuple:
    return p.leading_term()[0]


def _divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: tuple, b: tuple) -> tuple:
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub_exps(a: tuple, b: tuple) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def _monic(p: MultiPoly) -> MultiPoly:
    _, q = p.integer_primitive()
    return q.monic()


def top_reduce(p: MultiPoly, basis: Sequence[MultiPoly], lms: Sequence[tuple]) -> MultiPoly:
    """Reduce until the leading term is not divisible by any basis leading monomial."""
    while p:
        exps, c = p.leading_term()
        for g, m in zip(basis, lms):
            if _divides(m, exps):
                q = MultiPoly.monomial(_sub_exps(exps, m), Fraction(c) / g.leading_coefficient())
                p = p - q * g
                break
        else:
            return p
    return p


def s_polynomial(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    mf, mg = _lm(f), _lm(g)
    l = _lcm(mf, mg)
    a = MultiPoly.monomial(_sub_exps(l, mf), Fraction(1) / f.leading_coefficient())
    b = MultiPoly.monomial(_sub_exps(l, mg), Fraction(1) / g.leading_coefficient())
    return a * f - b * g


def pure_power_vars(lms: Sequence[tuple], nvars: int) -> set:
    out = set()
    for m in lms:
        nz = [i for i, e in enumerate(m) if e]
        if len(nz) == 1:
            out.add(nz[0])
    return out


@dataclass
class GroebnerRun:
    basis: List[MultiPoly]
    complete: bool  # every S-pair was processed (no caps hit)
    zero_dimensional: bool  # pure powers of every variable were found
    pairs_processed: int
    truncated: bool


def buchberger(polys: Sequence[MultiPoly], max_degree: Optional[int] = None, max_pairs: int = 5000,
               stop_when_zero_dimensional: bool = True) -> GroebnerRun:
    """Buchberger's algorithm with deterministic pair selection.

    Pairs are taken in order of (lcm degree, grevlex of lcm, i, j).  Pairs whose
    lcm exceeds ``max_degree`` are skipped and the run marked truncated.
    """
    polys = [p for p in polys if p]
    if not polys:
        raise ValueError("empty generator list")
    nvars = polys[0].nvars
    basis: List[MultiPoly] = []
    lms: List[tuple] = []
    pairs: List[Tuple[tuple, int, int]] = []
    truncated = False

    def add(p: MultiPoly) -> None:
        p = _monic(p)
        k = len(basis)
        basis.append(p)
        lms.append(_lm(p))
        for i in range(k):
            l = _lcm(lms[i], lms[k])
            pairs.append(((sum(l), grevlex_key(l)[1], i, k), i, k))

    for p in sorted(polys, key=lambda q: (q.degree(), len(q))):
        r = top_reduce(p, basis, lms)
        if r:
            add(r)
    done = 0
    while pairs:
        if stop_when_zero_dimensional and len(pure_power_vars(lms, nvars)) == nvars:
            return GroebnerRun(basis, False, True, done, truncated)
        pairs.sort(key=lambda t: t[0], reverse=True)
        key, i, j = pairs.pop()
        l = _lcm(lms[i], lms[j])
        # Buchberger's first criterion: coprime leading monomials reduce to zero
        if all(min(x, y) == 0 for x, y in zip(lms[i], lms[j])):
            continue
        # chain criterion
        if any(k not in (i, j) and _divides(lms[k], l) and _pair_gone(pairs, i, k) and _pair_gone(pairs, j, k)
               for k in range(len(basis))):
            continue
        if max_degree is not None and sum(l) > max_degree:
            truncated = True
            continue
        if done >= max_pairs:
            return GroebnerRun(basis, False, len(pure_power_vars(lms, nvars)) == nvars, done, True)
        done += 1
        r = top_reduce(s_polynomial(basis[i], basis[j]), basis, lms)
        if r:
            add(r)
    zd = len(pure_power_vars(lms, nvars)) == nvars
    return GroebnerRun(basis, not truncated, zd, done, truncated)


def _pair_gone(pairs, a: int, b: int) -> bool:
    lo, hi = min(a, b), max(a, b)
    return not any(p[1] == lo and p[2] == hi for p in pairs)


def reduce_full(p: MultiPoly, basis: Sequence[MultiPoly]) -> MultiPoly:
    """Complete normal form of ``p`` modulo ``basis``."""
    lms = [_lm(g) for g in basis]
    rem = MultiPoly.zero(p.nvars)
    while p:
        p = top_reduce(p, basis, lms)
        if p:
            lt = MultiPoly(p.nvars, dict([p.leading_term()]))
            rem = rem + lt
            p = p - lt
    return rem
