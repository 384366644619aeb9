"""Text syntax for polynomials, forms and the instance file formats.

Polynomials::

    3/2*x0^2*x1 - x2 + 7

Variable names ``x<i>``, ``z<i>`` and the plane aliases ``X, Y, Z`` (for
indices 0, 1, 2) are accepted; the printer uses one naming style throughout.

Forms are sums of ``coefficient differentials`` terms, e.g.::

    Y^2*Z dX + X^2*Z dY - (X^2*Y + X*Y^2) dZ

Differentials in one term are wedged in order; input may write the wedge as
juxtaposition (``dX dY``), ``^`` or ``∧``.  The printer emits ``dX^dY``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import ParseError
from .forms import KForm, _sort_sign
from .poly import MultiPoly, Scalar, grevlex_key

PLANE_NAMES = ("X", "Y", "Z")

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<diff>d(?:[XYZ](?![A-Za-z0-9_])|[xz]\d+))
  | (?P<var>[XYZ](?![A-Za-z0-9_])|[xz]\d+)
  | (?P<op>[-+*/^()]|∧)
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _var_index(name: str) -> int:
    if name in PLANE_NAMES:
        return PLANE_NAMES.index(name)
    return int(name[1:])


def _tokenize(text: str, line_offset: int = 0) -> List[_Tok]:
    toks: List[_Tok] = []
    pos = 0
    line, line_start = 1 + line_offset, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        tok_text = m.group()
        if kind == "ws":
            for k, ch in enumerate(tok_text):
                if ch == "\n":
                    line += 1
                    line_start = pos + k + 1
        else:
            toks.append(_Tok(kind, tok_text, line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("end", "", line, pos - line_start + 1))
    return toks


# An intermediate value is a dict {sorted index tuple: MultiPoly}: mixed degrees
# are allowed while parsing and rejected at the end.
_Val = Dict[Tuple[int, ...], MultiPoly]


class _Parser:
    def __init__(self, toks: List[_Tok], nvars: int, allow_forms: bool):
        self.toks = toks
        self.i = 0
        self.n = nvars
        self.allow_forms = allow_forms

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: Optional[_Tok] = None):
        tok = tok or self.peek()
        raise ParseError(msg, tok.line, tok.col)

    def expect(self, text: str) -> _Tok:
        t = self.peek()
        if t.text != text:
            self.error(f"expected {text!r}, found {t.text or 'end of input'!r}")
        return self.take()

    # values
    def const(self, c: Scalar) -> _Val:
        return {(): MultiPoly.constant(c, self.n)} if c else {}

    @staticmethod
    def add(a: _Val, b: _Val, sign: int = 1) -> _Val:
        out = dict(a)
        for k, v in b.items():
            v = v if sign > 0 else -v
            s = out[k] + v if k in out else v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return out

    @staticmethod
    def mul(a: _Val, b: _Val) -> _Val:
        out: _Val = {}
        for ka, va in a.items():
            for kb, vb in b.items():
                sign, key = _sort_sign(ka + kb)
                if not sign:
                    continue
                p = va * vb
                if sign < 0:
                    p = -p
                s = out[key] + p if key in out else p
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return out

    # grammar
    def parse(self) -> _Val:
        if self.peek().kind == "end":
            self.error("empty expression")
        val = self.expr()
        if self.peek().kind != "end":
            self.error(f"unexpected token {self.peek().text!r}")
        return val

    def expr(self) -> _Val:
        sign = 1
        if self.peek().text in "+-" and self.peek().kind == "op":
            sign = -1 if self.take().text == "-" else 1
        total = self.add({}, self.term(), sign)
        while self.peek().kind == "op" and self.peek().text in ("+", "-"):
            sign = -1 if self.take().text == "-" else 1
            total = self.add(total, self.term(), sign)
        return total

    def _starts_factor(self, t: _Tok) -> bool:
        return t.kind in ("num", "var", "diff") or t.text == "("

    def term(self) -> _Val:
        val = self.factor()
        while True:
            t = self.peek()
            if t.text in ("*", "∧") or (t.text == "^" and self.toks[self.i + 1].kind == "diff"):
                self.take()
                val = self.mul(val, self.factor())
            elif self._starts_factor(t):
                val = self.mul(val, self.factor())
            else:
                return val

    def factor(self) -> _Val:
        start = self.peek()
        base = self.atom()
        if self.peek().text == "^" and self.toks[self.i + 1].kind != "diff":
            self.take()
            t = self.peek()
            if t.kind != "num":
                self.error("exponent must be a nonnegative integer")
            self.take()
            k = int(t.text)
            if any(key for key in base):
                self.error("cannot raise a differential to a power", start)
            result = self.const(1)
            for _ in range(k):
                result = self.mul(result, base)
            return result
        return base

    def atom(self) -> _Val:
        t = self.peek()
        if t.kind == "num":
            self.take()
            value = Fraction(int(t.text))
            if self.peek().text == "/":
                self.take()
                d = self.peek()
                if d.kind != "num" or int(d.text) == 0:
                    self.error("denominator must be a positive integer")
                self.take()
                value /= int(d.text)
            return self.const(value)
        if t.kind == "var":
            self.take()
            idx = _var_index(t.text)
            return {(): MultiPoly.variable(idx, self.n)}
        if t.kind == "diff":
            if not self.allow_forms:
                self.error("differentials are not allowed in a polynomial")
            self.take()
            idx = _var_index(t.text[1:])
            return {(idx,): MultiPoly.constant(1, self.n)}
        if t.text == "(":
            self.take()
            val = self.expr()
            self.expect(")")
            return val
        self.error(f"unexpected token {t.text or 'end of input'!r}")


def _max_index(toks: List[_Tok]) -> int:
    m = -1
    for t in toks:
        if t.kind == "var":
            m = max(m, _var_index(t.text))
        elif t.kind == "diff":
            m = max(m, _var_index(t.text[1:]))
    return m


def parse_poly(text: str, nvars: Optional[int] = None, line_offset: int = 0) -> MultiPoly:
    """Parse a polynomial; ``nvars`` defaults to the largest index used plus one."""
    toks = _tokenize(text, line_offset)
    n = nvars if nvars is not None else max(_max_index(toks) + 1, 1)
    if _max_index(toks) >= n:
        raise ParseError(f"variable index exceeds {n - 1}", toks[0].line, toks[0].col)
    val = _Parser(toks, n, allow_forms=False).parse()
    return val.get((), MultiPoly.zero(n))


def parse_form(text: str, nvars: Optional[int] = None, line_offset: int = 0) -> KForm:
    toks = _tokenize(text, line_offset)
    n = nvars if nvars is not None else max(_max_index(toks) + 1, 1)
    if _max_index(toks) >= n:
        raise ParseError(f"variable index exceeds {n - 1}", toks[0].line, toks[0].col)
    val = _Parser(toks, n, allow_forms=True).parse()
    degrees = {len(k) for k in val}
    if len(degrees) > 1:
        raise ParseError(f"form mixes degrees {sorted(degrees)}", toks[0].line, toks[0].col)
    k = degrees.pop() if degrees else 1
    return KForm(n, k, val)


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

def var_names(nvars: int, style: Optional[str] = None) -> List[str]:
    """Variable names for a style: ``"x"``, ``"z"`` or ``"XYZ"``."""
    if style is None:
        style = "XYZ" if nvars == 3 else "x"
    if style == "XYZ":
        if nvars > 3:
            raise ValueError("the XYZ style only names three variables")
        return list(PLANE_NAMES[:nvars])
    return [f"{style}{i}" for i in range(nvars)]


def format_scalar(c: Scalar) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _monomial(exps: Sequence[int], names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _unsigned_term(exps, c: Scalar, names) -> str:
    mono = _monomial(exps, names)
    a = abs(Fraction(c))
    if not mono:
        return format_scalar(a)
    if a == 1:
        return mono
    return f"{format_scalar(a)}*{mono}"


def format_poly(p: MultiPoly, style: Optional[str] = None) -> str:
    if p.is_zero():
        return "0"
    names = var_names(p.nvars, style)
    out = []
    for k, (exps, c) in enumerate(p.sorted_terms()):
        body = _unsigned_term(exps, c, names)
        if k == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


def format_form(a: KForm, style: Optional[str] = None) -> str:
    if a.k == 0:
        return format_poly(a.as_function(), style)
    if a.is_zero():
        return "0"
    names = var_names(a.nvars, style)
    out = []
    for k, (idx, c) in enumerate(a.items()):
        diffs = "^".join("d" + names[i] for i in idx)
        lead = c.leading_coefficient()
        negative = lead < 0
        if len(c) == 1:
            (exps, val), = c.terms.items()
            mono = _monomial(exps, names)
            body = diffs if (not mono and abs(val) == 1) else f"{_unsigned_term(exps, val, names)} {diffs}"
        else:
            inner = format_poly(-c if negative else c, style)
            body = f"({inner}) {diffs}"
        if k == 0:
            out.append(("-" if negative else "") + body)
        else:
            out.append((" - " if negative else " + ") + body)
    return "".join(out)


# ---------------------------------------------------------------------------
# files
# ---------------------------------------------------------------------------

def _content_lines(text: str) -> List[Tuple[int, str]]:
    lines = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((no, line))
    return lines


def parse_header(line: str, line_no: int) -> Dict[str, int]:
    """Parse ``key=value`` integer pairs separated by whitespace."""
    out = {}
    for item in line.split():
        if "=" not in item:
            raise ParseError(f"header item {item!r} is not key=value", line_no, line.find(item) + 1)
        key, _, value = item.partition("=")
        try:
            out[key.strip()] = int(value)
        except ValueError:
            raise ParseError(f"header value {value!r} is not an integer", line_no, line.find(item) + 1) from None
    return out


def parse_foliation_text(text: str) -> Tuple[int, KForm]:
    """``n=<dim>`` header followed by a 1-form (possibly over several lines)."""
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty foliation file", 1, 1)
    no, head = lines[0]
    header = parse_header(head, no)
    if "n" not in header:
        raise ParseError("header must define n=<dim>", no, 1)
    n = header["n"]
    if n < 1:
        raise ParseError("projective dimension must be positive", no, 1)
    if len(lines) < 2:
        raise ParseError("missing 1-form after header", no + 1, 1)
    body = "\n".join(line for _, line in lines[1:])
    form = parse_form(body, n + 1, line_offset=lines[1][0] - 1)
    if form.k != 1:
        raise ParseError(f"expected a 1-form, found a {form.k}-form", lines[1][0], 1)
    return n, form


def format_foliation_text(n: int, form: KForm) -> str:
    style = "XYZ" if n == 2 else "z"
    return f"n={n}\n{format_form(form, style)}\n"


def parse_map_text(text: str) -> Tuple[Dict[str, int], List[MultiPoly]]:
    """Header ``n=.. nu=.. alpha=.. gamma=..`` followed by three polynomial lines."""
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty map file", 1, 1)
    no, head = lines[0]
    header = parse_header(head, no)
    for key in ("n", "nu", "alpha", "gamma"):
        if key not in header:
            raise ParseError(f"header must define {key}=..", no, 1)
    if len(lines) != 4:
        raise ParseError(f"expected 3 polynomial lines, found {len(lines) - 1}", lines[-1][0], 1)
    polys = [parse_poly(line, header["n"] + 1, line_offset=ln - 1) for ln, line in lines[1:]]
    return header, polys


def format_map_text(header: Dict[str, int], polys: Sequence[MultiPoly]) -> str:
    head = " ".join(f"{k}={header[k]}" for k in ("n", "nu", "alpha", "gamma"))
    return head + "\n" + "".join(format_poly(p, "z") + "\n" for p in polys)


def parse_point(text: str) -> List[Fraction]:
    """Comma-separated rationals, e.g. ``0,0,0,1`` or ``1/2,1,0``."""
    parts = [s.strip() for s in text.replace(":", ",").split(",") if s.strip()]
    if not parts:
        raise ParseError("empty point", 1, 1)
    try:
        return [Fraction(s) for s in parts]
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"cannot parse point {text!r}", 1, 1) from None
