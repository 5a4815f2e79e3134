"""Text grammar for exact scalars, polynomials, vector fields, and 1-forms.

Grammar summary (one expression per line, ``#`` starts a comment):

* rational literals ``3``, ``3/4``; the imaginary unit is the reserved
  identifier ``i`` (so ``1/2-3/4*i`` is a Gaussian-rational constant);
* variables ``x``, ``y``, ``z`` with synonyms ``x1``, ``x2``, ``x3``;
* operators ``+ - * ^`` and parentheses; ``^`` takes a literal nonnegative
  integer exponent; multiplication is always explicit (``2x`` is an error);
* component markers ``ddx ddy ddz`` (vector-field components) and ``dx dy``
  (1-form components) are multiplicative atoms — at most one marker per
  monomial, and field markers never mix with form markers.

Rendering is the exact inverse on parser-produced objects: graded-lex term
order, explicit ``*``, canonical scalar formatting.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple, Union

from .errors import ParseError
from .poly import (
    DEFAULT_NAMES,
    MultiPoly,
    OneFormGerm,
    VectorFieldGerm,
    render_poly,
)
from .scalars import GaussianRational

VAR_INDEX = {"x": 0, "x1": 0, "y": 1, "x2": 1, "z": 2, "x3": 2}
FIELD_MARKERS = {"ddx": 0, "ddy": 1, "ddz": 2}
FORM_MARKERS = {"dx": 0, "dy": 1}

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>\d+(?:/\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[+\-*^()]))"
)

_ATOM_STARTS = {"number", "ident", "("}


class _Token:
    __slots__ = ("kind", "text", "col")

    def __init__(self, kind: str, text: str, col: int):
        self.kind = kind
        self.text = text
        self.col = col


def _tokenize(text: str, line: int) -> List[_Token]:
    out: List[_Token] = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}",
                             line=line, col=pos + 1)
        tok_text = m.group(m.lastgroup)
        col = m.end() - len(tok_text) + 1
        if m.lastgroup == "op":
            out.append(_Token(tok_text, tok_text, col))
        else:
            out.append(_Token(m.lastgroup, tok_text, col))
        pos = m.end()
    return out


class _Value:
    """Intermediate parse value: marker -> 3-variable polynomial."""

    __slots__ = ("parts",)

    def __init__(self, parts: Optional[Dict[Optional[str], MultiPoly]] = None):
        self.parts = {m: p for m, p in (parts or {}).items() if not p.is_zero()}

    @classmethod
    def of_poly(cls, p: MultiPoly) -> "_Value":
        return cls({None: p})

    def markers(self):
        return set(self.parts) - {None}

    def plain(self) -> MultiPoly:
        return self.parts.get(None, MultiPoly.zero(3))

    def __add__(self, other: "_Value") -> "_Value":
        out = dict(self.parts)
        for m, p in other.parts.items():
            out[m] = out[m] + p if m in out else p
        return _Value(out)

    def __neg__(self) -> "_Value":
        return _Value({m: -p for m, p in self.parts.items()})


class _Parser:
    def __init__(self, tokens: List[_Token], line: int):
        self.tokens = tokens
        self.line = line
        self.k = 0

    def peek(self) -> Optional[_Token]:
        return self.tokens[self.k] if self.k < len(self.tokens) else None

    def next(self) -> _Token:
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of expression", line=self.line,
                             col=(self.tokens[-1].col if self.tokens else 1))
        self.k += 1
        return t

    def expect(self, kind: str) -> _Token:
        t = self.peek()
        if t is None or t.kind != kind:
            raise ParseError(
                f"expected {kind!r}" + (f", found {t.text!r}" if t else ""),
                line=self.line, col=(t.col if t else 1))
        return self.next()

    def fail_if_atom_follows(self):
        t = self.peek()
        if t is not None and (t.kind in _ATOM_STARTS):
            raise ParseError(
                "implicit multiplication is not allowed; insert '*'",
                line=self.line, col=t.col)

    # expr := term (('+'|'-') term)*
    def parse_expr(self) -> _Value:
        v = self.parse_term()
        while True:
            self.fail_if_atom_follows()
            t = self.peek()
            if t is None or t.kind not in ("+", "-"):
                return v
            self.next()
            rhs = self.parse_term()
            v = v + (rhs if t.kind == "+" else -rhs)

    # term := factor ('*' factor)*
    def parse_term(self) -> _Value:
        v = self.parse_factor()
        while True:
            self.fail_if_atom_follows()
            t = self.peek()
            if t is None or t.kind != "*":
                return v
            star = self.next()
            rhs = self.parse_factor()
            v = self._mul(v, rhs, star)

    def _mul(self, a: _Value, b: _Value, at: _Token) -> _Value:
        out: Dict[Optional[str], MultiPoly] = {}
        for m1, p1 in a.parts.items():
            for m2, p2 in b.parts.items():
                if m1 is not None and m2 is not None:
                    raise ParseError(
                        "at most one component marker per monomial",
                        line=self.line, col=at.col)
                m = m1 if m1 is not None else m2
                prod = p1 * p2
                out[m] = out[m] + prod if m in out else prod
        return _Value(out)

    # factor := '-' factor | power
    def parse_factor(self) -> _Value:
        t = self.peek()
        if t is not None and t.kind == "-":
            self.next()
            return -self.parse_factor()
        if t is not None and t.kind == "+":
            self.next()
            return self.parse_factor()
        return self.parse_power()

    # power := atom ['^' int]
    def parse_power(self) -> _Value:
        v = self.parse_atom()
        t = self.peek()
        if t is not None and t.kind == "^":
            caret = self.next()
            e = self.expect("number")
            if "/" in e.text:
                raise ParseError("exponent must be a nonnegative integer",
                                 line=self.line, col=e.col)
            n = int(e.text)
            if v.markers():
                raise ParseError("component markers cannot be raised to powers",
                                 line=self.line, col=caret.col)
            base = v.plain()
            return _Value.of_poly(base ** n)
        return v

    def parse_atom(self) -> _Value:
        t = self.next()
        if t.kind == "number":
            if "/" in t.text:
                num, den = t.text.split("/")
                if int(den) == 0:
                    raise ParseError("zero denominator", line=self.line, col=t.col)
                c = GaussianRational(Fraction(int(num), int(den)), 0)
            else:
                c = GaussianRational(int(t.text), 0)
            return _Value.of_poly(MultiPoly.constant(c, 3))
        if t.kind == "ident":
            name = t.text
            if name == "i":
                return _Value.of_poly(MultiPoly.constant(GaussianRational(0, 1), 3))
            if name in VAR_INDEX:
                return _Value.of_poly(MultiPoly.variable(VAR_INDEX[name], 3))
            if name in FIELD_MARKERS or name in FORM_MARKERS:
                return _Value({name: MultiPoly.constant(1, 3)})
            raise ParseError(f"unknown symbol {name!r}", line=self.line, col=t.col)
        if t.kind == "(":
            v = self.parse_expr()
            self.expect(")")
            return v
        raise ParseError(f"unexpected token {t.text!r}", line=self.line, col=t.col)


def _parse_value(text: str, line: int = 1) -> _Value:
    stripped = text.split("#", 1)[0]
    tokens = _tokenize(stripped, line)
    if not tokens:
        raise ParseError("empty expression", line=line, col=1)
    p = _Parser(tokens, line)
    v = p.parse_expr()
    t = p.peek()
    if t is not None:
        raise ParseError(f"unexpected token {t.text!r}", line=line, col=t.col)
    return v


def _project(p: MultiPoly, nvars: int, line: int) -> MultiPoly:
    """Narrow an internal 3-variable polynomial to its first ``nvars``."""
    out = {}
    for e, c in p.terms.items():
        if any(e[k] for k in range(nvars, 3)):
            raise ParseError(
                f"expression uses variable {DEFAULT_NAMES[3][max(k for k in range(3) if e[k])]}"
                f" but only {nvars} variables are allowed", line=line, col=1)
        out[e[:nvars]] = c
    return MultiPoly(nvars, out)


def _auto_nvars(v: _Value) -> int:
    uses_z = any(e[2] for p in v.parts.values() for e in p.terms)
    if uses_z or "ddz" in v.markers():
        return 3
    return 2


def parse_scalar_literal(text: str, line: int = 1) -> GaussianRational:
    """Parse a constant expression into a Gaussian rational."""
    v = _parse_value(text, line)
    if v.markers():
        raise ParseError("component marker in scalar expression", line=line, col=1)
    p = v.plain()
    extras = {e for e in p.terms if any(e)}
    if extras:
        raise ParseError("variables in scalar expression", line=line, col=1)
    c = p.constant_term()
    if isinstance(c, GaussianRational):
        return c
    raise ParseError("scalar expression did not reduce to a constant", line=line, col=1)


def parse_poly(text: str, nvars: Optional[int] = None, line: int = 1) -> MultiPoly:
    v = _parse_value(text, line)
    if v.markers():
        raise ParseError("unexpected component marker in polynomial expression",
                         line=line, col=1)
    n = nvars if nvars is not None else _auto_nvars(v)
    return _project(v.plain(), n, line)


def parse_field(text: str, nvars: Optional[int] = None, line: int = 1) -> VectorFieldGerm:
    v = _parse_value(text, line)
    if v.markers() & set(FORM_MARKERS):
        raise ParseError("1-form markers in a vector-field expression",
                         line=line, col=1)
    if not v.plain().is_zero():
        raise ParseError("vector-field expression has terms without a component marker",
                         line=line, col=1)
    n = nvars if nvars is not None else _auto_nvars(v)
    comps = [MultiPoly.zero(n) for _ in range(n)]
    for m in v.markers():
        idx = FIELD_MARKERS[m]
        if idx >= n:
            raise ParseError(f"marker {m!r} exceeds {n} variables", line=line, col=1)
        comps[idx] = _project(v.parts[m], n, line)
    return VectorFieldGerm(comps)


def parse_form(text: str, line: int = 1) -> OneFormGerm:
    v = _parse_value(text, line)
    if v.markers() & set(FIELD_MARKERS):
        raise ParseError("vector-field markers in a 1-form expression",
                         line=line, col=1)
    if not v.markers():
        if v.plain().is_zero():
            return OneFormGerm(MultiPoly.zero(2), MultiPoly.zero(2))
        raise ParseError("1-form expression needs dx or dy terms", line=line, col=1)
    if not v.plain().is_zero():
        raise ParseError("1-form expression has terms without a component marker",
                         line=line, col=1)
    a = _project(v.parts.get("dx", MultiPoly.zero(3)), 2, line)
    b = _project(v.parts.get("dy", MultiPoly.zero(3)), 2, line)
    return OneFormGerm(a, b)


def parse_any(text: str, line: int = 1) -> Union[MultiPoly, VectorFieldGerm, OneFormGerm]:
    """Parse an expression whose kind is decided by its markers."""
    v = _parse_value(text, line)
    has_field = bool(v.markers() & set(FIELD_MARKERS))
    has_form = bool(v.markers() & set(FORM_MARKERS))
    if has_field and has_form:
        raise ParseError("cannot mix vector-field and 1-form markers",
                         line=line, col=1)
    if has_field:
        return parse_field(text, line=line)
    if has_form:
        return parse_form(text, line=line)
    return parse_poly(text, line=line)


def iter_expressions(text: str) -> Iterator[Tuple[int, str]]:
    """Yield (line number, expression) skipping blanks and comments."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield lineno, body


# -- canonical rendering ----------------------------------------------
def render_scalar(c: GaussianRational) -> str:
    from .scalars import format_gaussian

    return format_gaussian(c)


def render_field(v: VectorFieldGerm) -> str:
    names = ("ddx", "ddy", "ddz")
    parts = [f"({render_poly(p)})*{names[k]}"
             for k, p in enumerate(v.components) if not p.is_zero()]
    return " + ".join(parts) if parts else "0"


def render_form(w: OneFormGerm) -> str:
    parts = []
    if not w.a.is_zero():
        parts.append(f"({render_poly(w.a)})*dx")
    if not w.b.is_zero():
        parts.append(f"({render_poly(w.b)})*dy")
    return " + ".join(parts) if parts else "0"


def render_any(obj) -> str:
    if isinstance(obj, VectorFieldGerm):
        return render_field(obj)
    if isinstance(obj, OneFormGerm):
        return render_form(obj)
    if isinstance(obj, MultiPoly):
        return render_poly(obj)
    if isinstance(obj, GaussianRational):
        return render_scalar(obj)
    raise TypeError(f"cannot render {type(obj).__name__}")
