"""Randomised identity pre-filters over a large prime field.

Evaluating both sides of a polynomial identity at random points modulo a prime
is a Schwartz-Zippel test: a nonzero value proves the identity false, while
agreement only makes it likely.  Callers always fall through to exact
verification when the filter passes.
"""

from __future__ import annotations

import random
from typing import Dict, Sequence, Tuple

from .forms import KForm, _sort_sign, exterior_derivative
from .poly import MultiPoly

PRIME = (1 << 61) - 1


def random_points(nvars: int, count: int, seed: int = 0):
    rng = random.Random(seed)
    return [[rng.randrange(1, PRIME) for _ in range(nvars)] for _ in range(count)]


def poly_nonzero_mod(p: MultiPoly, trials: int = 3, seed: int = 0) -> bool:
    """``True`` proves ``p != 0``; ``False`` is inconclusive."""
    return any(p.evaluate_mod(pt, PRIME) for pt in random_points(p.nvars, trials, seed))


def _wedge_values(a: Dict[tuple, int], b: Dict[tuple, int]) -> Dict[tuple, int]:
    out: Dict[tuple, int] = {}
    for ia, va in a.items():
        for ib, vb in b.items():
            sign, key = _sort_sign(ia + ib)
            if sign:
                out[key] = (out.get(key, 0) + sign * va * vb) % PRIME
    return {k: v for k, v in out.items() if v}


def integrability_obstructed(omega: KForm, trials: int = 3, seed: int = 0) -> bool:
    """``True`` proves ``omega ^ d omega != 0`` by pointwise evaluation."""
    domega = exterior_derivative(omega)
    for pt in random_points(omega.nvars, trials, seed):
        if _wedge_values(omega.evaluate_mod(pt, PRIME), domega.evaluate_mod(pt, PRIME)):
            return True
    return False
