"""Polynomial differential forms and vector fields.

A :class:`KForm` of degree ``k`` stores a map from strictly increasing index
tuples to nonzero :class:`MultiPoly` coefficients, so ``c * dx_i ^ dx_j`` with
``i < j`` is stored under ``(i, j)``.  Signs are normalised at construction,
which makes equality a plain dictionary comparison.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import ArityError
from .poly import MultiPoly, Scalar, poly_sum

Index = Tuple[int, ...]


def _sort_sign(idx: Sequence[int]) -> Tuple[int, Optional[Index]]:
    """Sign of the sorting permutation, or ``(0, None)`` on a repeated index."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, None
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return sign, tuple(idx)


class KForm:
    """Immutable polynomial ``k``-form in ``nvars`` variables."""

    __slots__ = ("nvars", "k", "coeffs")

    def __init__(self, nvars: int, k: int, coeffs: Optional[Mapping[Sequence[int], MultiPoly]] = None):
        if not 0 <= k:
            raise ValueError(f"form degree must be nonnegative, got {k}")
        self.nvars = nvars
        self.k = k
        acc: Dict[Index, MultiPoly] = {}
        for idx, c in (coeffs or {}).items():
            idx = tuple(idx)
            if len(idx) != k:
                raise ValueError(f"index tuple {idx} does not have length {k}")
            if any(not 0 <= i < nvars for i in idx):
                raise ArityError(f"index tuple {idx} out of range for {nvars} variables")
            if not isinstance(c, MultiPoly):
                c = MultiPoly.constant(c, nvars)
            elif c.nvars != nvars:
                raise ArityError(f"coefficient has {c.nvars} variables, form has {nvars}")
            sign, key = _sort_sign(idx)
            if not sign or c.is_zero():
                continue
            c = c if sign > 0 else -c
            acc[key] = acc[key] + c if key in acc else c
        self.coeffs: Dict[Index, MultiPoly] = {i: c for i, c in acc.items() if c}

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, nvars: int, k: int) -> "KForm":
        return cls(nvars, k)

    @classmethod
    def function(cls, p: MultiPoly) -> "KForm":
        return cls(p.nvars, 0, {(): p})

    @classmethod
    def one_form(cls, coeffs: Sequence[MultiPoly]) -> "KForm":
        n = len(coeffs)
        return cls(n, 1, {(i,): c for i, c in enumerate(coeffs)})

    @classmethod
    def basis(cls, idx: Sequence[int], nvars: int) -> "KForm":
        return cls(nvars, len(idx), {tuple(idx): MultiPoly.constant(1, nvars)})

    @classmethod
    def volume3(cls, nvars: int = 3) -> "KForm":
        """``dx0 ^ dx1 ^ dx2`` in the first three variables."""
        return cls.basis((0, 1, 2), nvars)

    # -- queries ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def coefficient(self, idx: Sequence[int]) -> MultiPoly:
        sign, key = _sort_sign(idx)
        if not sign:
            return MultiPoly.zero(self.nvars)
        c = self.coeffs.get(key, MultiPoly.zero(self.nvars))
        return c if sign > 0 else -c

    def one_form_coeffs(self) -> List[MultiPoly]:
        if self.k != 1:
            raise ValueError("not a 1-form")
        return [self.coeffs.get((i,), MultiPoly.zero(self.nvars)) for i in range(self.nvars)]

    def as_function(self) -> MultiPoly:
        if self.k != 0:
            raise ValueError("not a 0-form")
        return self.coeffs.get((), MultiPoly.zero(self.nvars))

    def items(self):
        return sorted(self.coeffs.items())

    def coefficient_list(self) -> List[MultiPoly]:
        return [c for _, c in self.items()]

    def coefficient_degrees(self) -> set:
        return {c.degree() for c in self.coeffs.values()}

    def is_homogeneous(self) -> bool:
        return all(c.is_homogeneous() for c in self.coeffs.values()) and len(self.coefficient_degrees()) <= 1

    def weights(self, weights: Sequence[int]) -> set:
        """Weighted degrees of all terms, counting ``dx_i`` with weight ``weights[i]``."""
        out = set()
        for idx, c in self.coeffs.items():
            base = sum(weights[i] for i in idx)
            out |= {base + w for w in c.weighted_degrees(weights)}
        return out

    # -- algebra ------------------------------------------------------
    def _check(self, other: "KForm") -> None:
        if not isinstance(other, KForm):
            raise TypeError(f"expected a KForm, got {type(other).__name__}")
        if other.nvars != self.nvars:
            raise ArityError(f"forms live in {self.nvars} and {other.nvars} variables")

    def __add__(self, other: "KForm") -> "KForm":
        self._check(other)
        if other.k != self.k:
            if not other:
                return self
            if not self:
                return other
            raise ValueError(f"cannot add a {self.k}-form and a {other.k}-form")
        acc = dict(self.coeffs)
        for idx, c in other.coeffs.items():
            acc[idx] = acc[idx] + c if idx in acc else c
        return KForm(self.nvars, self.k, acc)

    def __neg__(self) -> "KForm":
        return KForm(self.nvars, self.k, {i: -c for i, c in self.coeffs.items()})

    def __sub__(self, other: "KForm") -> "KForm":
        return self + (-other)

    def scale(self, f) -> "KForm":
        """Multiply every coefficient by a scalar or polynomial."""
        return KForm(self.nvars, self.k, {i: c * f for i, c in self.coeffs.items()})

    def __mul__(self, f) -> "KForm":
        if isinstance(f, KForm):
            return wedge(self, f)
        return self.scale(f)

    __rmul__ = scale

    def __xor__(self, other: "KForm") -> "KForm":
        return wedge(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, KForm):
            return NotImplemented
        if self.nvars != other.nvars:
            return False
        if not self.coeffs and not other.coeffs:
            return True
        return self.k == other.k and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.nvars, self.k, frozenset(self.coeffs.items())))

    def map_coeffs(self, fn) -> "KForm":
        return KForm(self.nvars, self.k, {i: fn(c) for i, c in self.coeffs.items()})

    def evaluate(self, point: Sequence) -> Dict[Index, Scalar]:
        """Coefficient values at a point; zero values are dropped."""
        out = {}
        for idx, c in self.coeffs.items():
            v = c.evaluate(point)
            if v:
                out[idx] = v
        return out

    def evaluate_mod(self, point: Sequence[int], prime: int) -> Dict[Index, int]:
        out = {}
        for idx, c in self.coeffs.items():
            v = c.evaluate_mod(point, prime)
            if v:
                out[idx] = v
        return out

    def __repr__(self) -> str:
        from .textio import format_form

        return f"KForm({format_form(self)!r}, nvars={self.nvars}, k={self.k})"

    def __str__(self) -> str:
        from .textio import format_form

        return format_form(self)


class PolyVectorField:
    """Immutable polynomial vector field ``sum_i v_i d/dx_i``."""

    __slots__ = ("nvars", "components")

    def __init__(self, components: Sequence[MultiPoly]):
        comps = tuple(components)
        if not comps:
            raise ValueError("a vector field needs at least one component")
        n = comps[0].nvars
        if len(comps) != n or any(c.nvars != n for c in comps):
            raise ArityError(f"vector field needs {n} components in {n} variables")
        self.nvars = n
        self.components = comps

    @classmethod
    def radial(cls, nvars: int) -> "PolyVectorField":
        return cls.weighted_radial([1] * nvars)

    @classmethod
    def weighted_radial(cls, weights: Sequence[int]) -> "PolyVectorField":
        n = len(weights)
        return cls([MultiPoly.variable(i, n).scale(w) for i, w in enumerate(weights)])

    @classmethod
    def coordinate(cls, i: int, nvars: int, coeff=1) -> "PolyVectorField":
        comps = [MultiPoly.zero(nvars)] * nvars
        comps[i] = MultiPoly.constant(coeff, nvars)
        return cls(comps)

    def __getitem__(self, i: int) -> MultiPoly:
        return self.components[i]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyVectorField):
            return NotImplemented
        return self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __add__(self, other: "PolyVectorField") -> "PolyVectorField":
        return PolyVectorField([a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "PolyVectorField") -> "PolyVectorField":
        return PolyVectorField([a - b for a, b in zip(self.components, other.components)])

    def scale(self, f) -> "PolyVectorField":
        return PolyVectorField([c * f for c in self.components])

    def apply(self, p: MultiPoly) -> MultiPoly:
        """Directional derivative ``v(p)``."""
        return poly_sum((vi * p.partial(i) for i, vi in enumerate(self.components) if vi), self.nvars)

    def jacobian(self) -> List[List[MultiPoly]]:
        return [[c.partial(j) for j in range(self.nvars)] for c in self.components]

    def jacobian_at(self, point: Sequence) -> List[List[Scalar]]:
        return [[entry.evaluate(point) for entry in row] for row in self.jacobian()]

    def evaluate(self, point: Sequence) -> List[Scalar]:
        return [c.evaluate(point) for c in self.components]

    def __repr__(self) -> str:
        from .textio import format_poly

        return "PolyVectorField([" + ", ".join(repr(format_poly(c)) for c in self.components) + "])"


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def wedge(a: KForm, b: KForm) -> KForm:
    """Exterior product; degree overflow gives the zero form."""
    a._check(b)
    k = a.k + b.k
    acc: Dict[Index, MultiPoly] = {}
    if k > a.nvars:
        return KForm(a.nvars, k)
    for ia, ca in a.coeffs.items():
        for ib, cb in b.coeffs.items():
            sign, key = _sort_sign(ia + ib)
            if not sign:
                continue
            prod = ca * cb
            if sign < 0:
                prod = -prod
            acc[key] = acc[key] + prod if key in acc else prod
    return KForm(a.nvars, k, acc)


def exterior_derivative(a: KForm) -> KForm:
    """``d`` of a form; a top-degree input gives the zero form of degree k+1."""
    if a.k >= a.nvars:
        return KForm(a.nvars, a.k + 1)
    acc: Dict[Index, List[MultiPoly]] = {}
    for idx, c in a.coeffs.items():
        for i in range(a.nvars):
            if i in idx:
                continue
            dc = c.partial(i)
            if not dc:
                continue
            pos = sum(1 for j in idx if j < i)
            key = tuple(sorted(idx + (i,)))
            acc.setdefault(key, []).append(dc if pos % 2 == 0 else -dc)
    return KForm(a.nvars, a.k + 1, {key: poly_sum(parts, a.nvars) for key, parts in acc.items()})


def contract(v: PolyVectorField, a: KForm) -> KForm:
    """Interior product ``i_v a``."""
    if v.nvars != a.nvars:
        raise ArityError(f"vector field in {v.nvars} variables, form in {a.nvars}")
    if a.k == 0:
        raise ValueError("cannot contract a 0-form")
    acc: Dict[Index, List[MultiPoly]] = {}
    for idx, c in a.coeffs.items():
        for pos, i in enumerate(idx):
            vi = v.components[i]
            if not vi:
                continue
            term = vi * c
            key = idx[:pos] + idx[pos + 1:]
            acc.setdefault(key, []).append(term if pos % 2 == 0 else -term)
    return KForm(a.nvars, a.k - 1, {key: poly_sum(parts, a.nvars) for key, parts in acc.items()})


def lie_derivative(v: PolyVectorField, a: KForm) -> KForm:
    """``L_v a = i_v da + d(i_v a)`` (Cartan's formula)."""
    if v.nvars != a.nvars:
        raise ArityError(f"vector field in {v.nvars} variables, form in {a.nvars}")
    da = exterior_derivative(a)
    first = contract(v, da)
    if a.k == 0:
        return first
    return first + exterior_derivative(contract(v, a))


def lie_bracket(v: PolyVectorField, w: PolyVectorField) -> PolyVectorField:
    """``[v, w]_i = v(w_i) - w(v_i)``."""
    if v.nvars != w.nvars:
        raise ArityError(f"vector fields in {v.nvars} and {w.nvars} variables")
    return PolyVectorField([v.apply(wi) - w.apply(vi) for vi, wi in zip(v.components, w.components)])


def rot3(w: KForm) -> PolyVectorField:
    """The field ``Z`` with ``i_Z(dx0 ^ dx1 ^ dx2) = w`` for a 2-form in 3 variables."""
    if w.nvars != 3 or (w.k != 2 and w):
        raise ValueError("rot3 needs a 2-form in exactly 3 variables")
    return PolyVectorField([w.coefficient((1, 2)), -w.coefficient((0, 2)), w.coefficient((0, 1))])


def pullback_form(a: KForm, subs: Sequence[MultiPoly]) -> KForm:
    """Pull back ``a`` along the polynomial map ``x_i -> subs[i]``."""
    if len(subs) != a.nvars:
        raise ArityError(f"pull-back needs {a.nvars} component polynomials, got {len(subs)}")
    m = subs[0].nvars
    if a.k == 0:
        return KForm.function(a.as_function().compose(subs)) if a else KForm.zero(m, 0)
    differentials = {}

    def dsub(i: int) -> KForm:
        if i not in differentials:
            differentials[i] = exterior_derivative(KForm.function(subs[i]))
        return differentials[i]

    total = KForm.zero(m, a.k)
    for idx, c in a.items():
        piece = KForm.function(c.compose(subs))
        for i in idx:
            piece = wedge(piece, dsub(i))
        total = total + piece
    return total


def saturate(a: KForm) -> Tuple[MultiPoly, KForm]:
    """Split ``a = g * b`` with ``g`` the monic gcd of all coefficients."""
    from .gcd import content_gcd, divide_exact

    if not a:
        raise ValueError("cannot saturate the zero form")
    g = content_gcd(a.coefficient_list())
    if g.is_constant():
        return g, a
    return g, a.map_coeffs(lambda c: divide_exact(c, g))


def is_closed(a: KForm) -> bool:
    return exterior_derivative(a).is_zero()


def dx(i: int, nvars: int) -> KForm:
    return KForm.basis((i,), nvars)
