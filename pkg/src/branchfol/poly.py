"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`MultiPoly` maps exponent tuples to nonzero coefficients.  Coefficients
are Python ``int`` or :class:`fractions.Fraction` values; ints are kept as ints
because integer arithmetic is several times faster than ``Fraction`` and the two
compare and hash identically.

Terms are iterated in graded reverse lexicographic (grevlex) order, the single
monomial order used everywhere in the package.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import ArityError

try:  # GMP multiplication is much faster than CPython's for multi-megabit ints
    from gmpy2 import mpz as _bigint
except ImportError:  # pragma: no cover
    _bigint = int

Exponents = Tuple[int, ...]
Scalar = Union[int, Fraction]


def to_scalar(value) -> Scalar:
    """Coerce ``value`` to an exact scalar (int or Fraction in lowest terms)."""
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, Rational):
        return to_scalar(Fraction(value.numerator, value.denominator))
    if isinstance(value, str):
        return to_scalar(Fraction(value))
    raise TypeError(f"not an exact rational: {value!r}")


def grevlex_key(exps: Exponents) -> Tuple[int, Tuple[int, ...]]:
    """Sort key realising grevlex: larger key means larger monomial."""
    return (sum(exps), tuple(-e for e in reversed(exps)))


def _pack_width(max_degree: int) -> int:
    return max(max_degree, 1).bit_length() + 1


class MultiPoly:
    """Immutable sparse polynomial in ``nvars`` variables over the rationals."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Optional[Mapping[Exponents, Scalar]] = None, *, _trusted: bool = False):
        self.nvars = nvars
        if _trusted:
            self.terms: Dict[Exponents, Scalar] = terms  # type: ignore[assignment]
        else:
            clean: Dict[Exponents, Scalar] = {}
            for exps, c in (terms or {}).items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != nvars:
                    raise ArityError(f"monomial {exps} does not have {nvars} exponents")
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                c = to_scalar(c)
                if c:
                    c = clean.get(exps, 0) + c
                    if c:
                        clean[exps] = c
                    else:
                        clean.pop(exps, None)
            self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls(nvars, {}, _trusted=True)

    @classmethod
    def constant(cls, value, nvars: int) -> "MultiPoly":
        c = to_scalar(value)
        return cls(nvars, {(0,) * nvars: c} if c else {}, _trusted=True)

    @classmethod
    def variable(cls, index: int, nvars: int) -> "MultiPoly":
        if not 0 <= index < nvars:
            raise IndexError(f"variable index {index} out of range for {nvars} variables")
        exps = [0] * nvars
        exps[index] = 1
        return cls(nvars, {tuple(exps): 1}, _trusted=True)

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1) -> "MultiPoly":
        return cls(len(exps), {tuple(exps): coeff})

    @classmethod
    def variables(cls, nvars: int) -> List["MultiPoly"]:
        return [cls.variable(i, nvars) for i in range(nvars)]

    def _new(self, terms: Dict[Exponents, Scalar]) -> "MultiPoly":
        return MultiPoly(self.nvars, terms, _trusted=True)

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ArityError(f"variable-count mismatch: {self.nvars} vs {other.nvars}")
            return other
        return MultiPoly.constant(other, self.nvars)

    # -- basic queries ------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and (0,) * self.nvars in self.terms)

    def constant_term(self) -> Scalar:
        return self.terms.get((0,) * self.nvars, 0)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def min_degree(self) -> int:
        return min((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        degrees = {sum(e) for e in self.terms}
        return len(degrees) <= 1

    def weighted_degrees(self, weights: Sequence[int]) -> set:
        return {sum(w * e for w, e in zip(weights, exps)) for exps in self.terms}

    def sorted_terms(self, reverse: bool = True) -> List[Tuple[Exponents, Scalar]]:
        """Terms in grevlex order, largest first by default."""
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=reverse)

    def leading_term(self) -> Tuple[Exponents, Scalar]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exps = max(self.terms, key=grevlex_key)
        return exps, self.terms[exps]

    def leading_coefficient(self) -> Scalar:
        return self.leading_term()[1]

    def coefficient(self, exps: Sequence[int]) -> Scalar:
        return self.terms.get(tuple(exps), 0)

    def variables_used(self) -> List[int]:
        used = set()
        for exps in self.terms:
            used.update(i for i, e in enumerate(exps) if e)
        return sorted(used)

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        if len(other.terms) > len(self.terms):
            big, small = other.terms, self.terms
        else:
            big, small = self.terms, other.terms
        out = dict(big)
        for exps, c in small.items():
            s = out.get(exps, 0) + c
            if s:
                out[exps] = s
            else:
                del out[exps]
        return self._new(out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MultiPoly":
        return self._coerce(other) - self

    def scale(self, c) -> "MultiPoly":
        c = to_scalar(c)
        if not c:
            return MultiPoly.zero(self.nvars)
        if c == 1:
            return self
        return self._new({e: v * c for e, v in self.terms.items()})

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        other = self._coerce(other)
        if not self.terms or not other.terms:
            return MultiPoly.zero(self.nvars)
        if len(self.terms) == 1 or len(other.terms) == 1:
            if len(self.terms) != 1:
                self, other = other, self
            (e1, c1), = self.terms.items()
            return self._new({tuple(a + b for a, b in zip(e1, e2)): c1 * c2 for e2, c2 in other.terms.items()})
        if len(self.terms) * len(other.terms) >= KRONECKER_MIN_WORK:
            r = _kronecker_mul(self, other)
            if r is not None:
                return r
        return _packed_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, c) -> "MultiPoly":
        if isinstance(c, MultiPoly):
            from .gcd import divide_exact

            q = divide_exact(self, c)
            if q is None:
                raise ArithmeticError("polynomial division is not exact")
            return q
        c = to_scalar(c)
        if not c:
            raise ZeroDivisionError("division of a polynomial by zero")
        return self.scale(Fraction(1) / c)

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        try:
            return self == MultiPoly.constant(other, self.nvars)
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # -- calculus and substitution -----------------------------------
    def partial(self, i: int) -> "MultiPoly":
        """Formal partial derivative with respect to variable ``i``."""
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range for {self.nvars} variables")
        out: Dict[Exponents, Scalar] = {}
        for exps, c in self.terms.items():
            e = exps[i]
            if e:
                new = exps[:i] + (e - 1,) + exps[i + 1:]
                out[new] = c * e
        return self._new(out)

    def gradient(self) -> List["MultiPoly"]:
        return [self.partial(i) for i in range(self.nvars)]

    def compose(self, subs: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute ``subs[i]`` for variable ``i``.

        Powers of each substituted polynomial are computed once and cached, so
        the cost is dominated by one product per term.
        """
        if len(subs) != self.nvars:
            raise ArityError(f"compose needs {self.nvars} substitutions, got {len(subs)}")
        if not subs:
            return self
        target = subs[0].nvars
        if any(s.nvars != target for s in subs):
            raise ArityError("substituted polynomials must share one variable count")
        cache: List[Dict[int, MultiPoly]] = [{0: MultiPoly.constant(1, target), 1: s} for s in subs]

        def power(i: int, k: int) -> MultiPoly:
            table = cache[i]
            if k not in table:
                half = power(i, k // 2)
                table[k] = half * half if k % 2 == 0 else half * half * subs[i]
            return table[k]

        acc: Dict[Exponents, Scalar] = {}
        for exps, c in self.sorted_terms():
            term: Optional[MultiPoly] = None
            for i, e in enumerate(exps):
                if e:
                    p = power(i, e)
                    term = p if term is None else term * p
            if term is None:
                term = MultiPoly.constant(1, target)
            for te, tc in term.terms.items():
                s = acc.get(te, 0) + c * tc
                if s:
                    acc[te] = s
                else:
                    acc.pop(te, None)
        return MultiPoly(target, acc, _trusted=True)

    def substitute(self, assignments: Mapping[int, Scalar]) -> "MultiPoly":
        """Set some variables to constants; variable count is unchanged."""
        out: Dict[Exponents, Scalar] = {}
        for exps, c in self.terms.items():
            new = list(exps)
            for i, v in assignments.items():
                if new[i]:
                    c = c * to_scalar(v) ** new[i]
                    new[i] = 0
            if c:
                key = tuple(new)
                s = out.get(key, 0) + c
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return self._new(out)

    def drop_variable(self, i: int) -> "MultiPoly":
        """Remove variable ``i``, which must not occur."""
        if any(e[i] for e in self.terms):
            raise ValueError(f"variable {i} still occurs")
        return MultiPoly(self.nvars - 1, {e[:i] + e[i + 1:]: c for e, c in self.terms.items()}, _trusted=True)

    def insert_variable(self, i: int) -> "MultiPoly":
        """Embed into one more variable, new variable at index ``i``."""
        return MultiPoly(self.nvars + 1, {e[:i] + (0,) + e[i:]: c for e, c in self.terms.items()}, _trusted=True)

    def homogenize(self, i: int, degree: Optional[int] = None) -> "MultiPoly":
        """Homogenize using existing variable ``i`` (which must be absent)."""
        deg = self.degree() if degree is None else degree
        out = {}
        for exps, c in self.terms.items():
            new = list(exps)
            new[i] = deg - sum(exps)
            out[tuple(new)] = c
        return MultiPoly(self.nvars, out, _trusted=True)

    def evaluate(self, point: Sequence) -> Scalar:
        """Exact value at a point of rationals (complex floats also work)."""
        if len(point) != self.nvars:
            raise ArityError(f"point has {len(point)} coordinates, polynomial has {self.nvars} variables")
        total = 0
        for exps, c in self.terms.items():
            v = c
            for x, e in zip(point, exps):
                if e:
                    v = v * x ** e
            total = total + v
        return to_scalar(total) if isinstance(total, (int, Fraction)) else total

    def evaluate_float(self, point: Sequence[complex]) -> complex:
        total = 0j
        for exps, c in self.terms.items():
            v = complex(float(c))
            for x, e in zip(point, exps):
                if e:
                    v *= x ** e
            total += v
        return total

    def evaluate_mod(self, point: Sequence[int], prime: int) -> int:
        total = 0
        for exps, c in self.terms.items():
            if isinstance(c, Fraction):
                v = c.numerator * pow(c.denominator, -1, prime)
            else:
                v = c
            for x, e in zip(point, exps):
                if e:
                    v = v * pow(x, e, prime)
            total = (total + v) % prime
        return total

    # -- normalisation ------------------------------------------------
    def monic(self) -> "MultiPoly":
        if not self.terms:
            return self
        return self.scale(Fraction(1) / self.leading_coefficient())

    def integer_primitive(self) -> Tuple[Fraction, "MultiPoly"]:
        """Return ``(c, q)`` with ``self == c * q``, q integral with content 1 and positive lead."""
        from math import gcd, lcm

        if not self.terms:
            return Fraction(1), self
        den = 1
        for c in self.terms.values():
            if isinstance(c, Fraction):
                den = lcm(den, c.denominator)
        ints = {e: int(c * den) for e, c in self.terms.items()}
        g = 0
        for v in ints.values():
            g = gcd(g, v)
        if ints[self.leading_term()[0]] < 0:
            g = -g
        return Fraction(g, den), self._new({e: v // g for e, v in ints.items()})

    # -- display ------------------------------------------------------
    def __repr__(self) -> str:
        from .textio import format_poly

        return f"MultiPoly({format_poly(self)!r}, nvars={self.nvars})"

    def __str__(self) -> str:
        from .textio import format_poly

        return format_poly(self)


def _packed_mul(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """Product via exponent packing into single ints (no carries by construction)."""
    n = p.nvars
    width = _pack_width(p.degree() + q.degree())
    shifts = [width * i for i in range(n)]

    def pack(exps: Exponents) -> int:
        key = 0
        for e, s in zip(exps, shifts):
            key |= e << s
        return key

    pa = [(pack(e), c) for e, c in p.terms.items()]
    qa = [(pack(e), c) for e, c in q.terms.items()]
    if len(pa) > len(qa):
        pa, qa = qa, pa
    acc: Dict[int, Scalar] = {}
    get = acc.get
    for k1, c1 in pa:
        for k2, c2 in qa:
            k = k1 + k2
            acc[k] = get(k, 0) + c1 * c2
    mask = (1 << width) - 1
    out: Dict[Exponents, Scalar] = {}
    for k, c in acc.items():
        if c:
            out[tuple((k >> s) & mask for s in shifts)] = c
    return MultiPoly(n, out, _trusted=True)


KRONECKER_MIN_WORK = 3000


def _integer_terms(p: MultiPoly) -> Tuple[int, Dict[Exponents, int]]:
    from math import lcm

    den = 1
    mixed = False
    for c in p.terms.values():
        if type(c) is not int:
            mixed = True
            den = lcm(den, c.denominator)
    if not mixed:
        return 1, p.terms  # type: ignore[return-value]
    return den, {e: int(c * den) for e, c in p.terms.items()}


def _kronecker_mul(p: MultiPoly, q: MultiPoly) -> Optional[MultiPoly]:
    """Product by Kronecker substitution into one big integer.

    Exponents are packed in mixed radix (after dropping the last variable when
    both factors are homogeneous), coefficients in fixed-width signed slots
    wide enough that no slot can overflow.  Returns ``None`` when the dense
    slot count would exceed the schoolbook work.
    """
    n = p.nvars
    homog = n > 1 and p.is_homogeneous() and q.is_homogeneous()
    nv = n - 1 if homog else n
    radix = [p.degree_in(i) + q.degree_in(i) + 1 for i in range(nv)]
    slots = 1
    for r in radix:
        slots *= r
    if slots > 8 * len(p.terms) * len(q.terms):
        return None
    strides = []
    acc = 1
    for r in radix:
        strides.append(acc)
        acc *= r
    dp, pt = _integer_terms(p)
    dq, qt = _integer_terms(q)
    bound = max(map(abs, pt.values())) * max(map(abs, qt.values())) * min(len(pt), len(qt))
    nb = (bound.bit_length() + 2 + 7) // 8
    bits = 8 * nb

    def pack(terms: Mapping[Exponents, int]) -> int:
        top = max(sum(e[i] * strides[i] for i in range(nv)) for e in terms) + 1
        pos = bytearray(top * nb)
        neg = bytearray(top * nb)
        for e, c in terms.items():
            k = sum(e[i] * strides[i] for i in range(nv)) * nb
            if c > 0:
                pos[k:k + nb] = c.to_bytes(nb, "little")
            else:
                neg[k:k + nb] = (-c).to_bytes(nb, "little")
        return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")

    prod = _bigint(pack(pt)) * _bigint(pack(qt))
    half = 1 << (bits - 1)
    zero_slot = half.to_bytes(nb, "little")
    prod = int(prod + _bigint(int.from_bytes(zero_slot * slots, "little")))
    buf = prod.to_bytes(slots * nb, "little")
    total = p.degree() + q.degree() if homog else 0
    den = dp * dq
    out: Dict[Exponents, Scalar] = {}
    for k in range(slots):
        chunk = buf[k * nb:(k + 1) * nb]
        if chunk == zero_slot:
            continue
        c = int.from_bytes(chunk, "little") - half
        exps = []
        rem = k
        for r in radix:
            rem, e = divmod(rem, r)
            exps.append(e)
        # divmod chain yields low variables first
        if homog:
            exps.append(total - sum(exps))
        out[tuple(exps)] = c if den == 1 else to_scalar(Fraction(c, den))
    return MultiPoly(n, out, _trusted=True)


def poly_sum(polys: Iterable[MultiPoly], nvars: int) -> MultiPoly:
    acc: Dict[Exponents, Scalar] = {}
    for p in polys:
        for e, c in p.terms.items():
            s = acc.get(e, 0) + c
            if s:
                acc[e] = s
            else:
                acc.pop(e, None)
    return MultiPoly(nvars, acc, _trusted=True)


def iter_monomials(nvars: int, degree: int) -> Iterator[Exponents]:
    """All exponent tuples of the given total degree, grevlex descending."""
    def rec(i: int, left: int) -> Iterator[Exponents]:
        if i == nvars - 1:
            yield (left,)
            return
        for e in range(left, -1, -1):
            for rest in rec(i + 1, left - e):
                yield (e,) + rest

    if nvars == 0:
        if degree == 0:
            yield ()
        return
    yield from sorted(rec(0, degree), key=grevlex_key, reverse=True)


def random_homogeneous(nvars: int, degree: int, rng, coeff_range: int = 5, density: float = 1.0) -> MultiPoly:
    """Seeded random homogeneous polynomial with small integer coefficients."""
    terms = {}
    for exps in iter_monomials(nvars, degree):
        if density >= 1.0 or rng.random() < density:
            c = rng.randint(-coeff_range, coeff_range)
            if c:
                terms[exps] = c
    return MultiPoly(nvars, terms)


def random_poly(nvars: int, max_degree: int, rng, coeff_range: int = 5, nterms: int = 6) -> MultiPoly:
    terms = {}
    for _ in range(nterms):
        exps = [0] * nvars
        for _ in range(rng.randint(0, max_degree)):
            exps[rng.randrange(nvars)] += 1
        num = rng.randint(-coeff_range, coeff_range)
        den = rng.randint(1, 3)
        terms[tuple(exps)] = terms.get(tuple(exps), 0) + Fraction(num, den)
    return MultiPoly(nvars, terms)


class _Heap:
    """Max-heap of monomials under grevlex with lazy deletion."""

    __slots__ = ("_items", "_seen")

    def __init__(self, exps: Iterable[Exponents] = ()):
        self._items = [(-sum(e), tuple(reversed(e)), e) for e in exps]
        heapq.heapify(self._items)
        self._seen = {item[2] for item in self._items}

    def push(self, e: Exponents) -> None:
        if e not in self._seen:
            self._seen.add(e)
            heapq.heappush(self._items, (-sum(e), tuple(reversed(e)), e))

    def pop(self) -> Optional[Exponents]:
        if not self._items:
            return None
        e = heapq.heappop(self._items)[2]
        self._seen.discard(e)
        return e
