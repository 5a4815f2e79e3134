"""Dynamic algebraic field towers over the Gaussian rationals.

A FieldTower is a chain of simple algebraic extensions: the base field is
Q(i) (or plain Q), and each level adjoins a root of a monic irreducible
polynomial over the level below.  Elements are stored as coordinate vectors
over the power basis of each level (nested tuples with GaussianRational
leaves), so structural equality is mathematical equality.

The module also provides a small dense univariate-polynomial toolkit (the
``tp_*`` functions) over any of the package's exact scalars, and complete
univariate factorization over a tower: sympy handles the base field (QQ or
QQ_I) and a Trager norm descent lifts factorizations through the extension
levels.  Degree and depth caps convert runaway extensions into clean errors.
"""

from __future__ import annotations

from contextlib import contextmanager
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    DivisionByZero,
    ExtensionDegreeExceeded,
    InternalInvariantViolation,
    NotMonic,
    ReducibleMinimalPolynomial,
    TowerDepthExceeded,
    TowerMismatch,
)
from .scalars import GaussianRational, ONE, ZERO, format_gaussian

DEFAULT_DEPTH_CAP = 3
DEFAULT_DEGREE_CAP = 6


@contextmanager
def tower_caps(depth: Optional[int] = None, degree: Optional[int] = None):
    """Temporarily override the default adjunction caps (depth of nested
    extensions, degree of a single extension) for all adjoin operations
    performed inside the ``with`` block."""
    global DEFAULT_DEPTH_CAP, DEFAULT_DEGREE_CAP
    old = (DEFAULT_DEPTH_CAP, DEFAULT_DEGREE_CAP)
    if depth is not None:
        DEFAULT_DEPTH_CAP = depth
    if degree is not None:
        DEFAULT_DEGREE_CAP = degree
    try:
        yield
    finally:
        DEFAULT_DEPTH_CAP, DEFAULT_DEGREE_CAP = old


# =====================================================================
# Field tower and elements
# =====================================================================
class TowerLevel:
    """One extension step: a named generator and its monic minimal polynomial
    (coefficients are elements of the tower below, ascending, leading 1)."""

    __slots__ = ("name", "minpoly", "degree", "embedding")

    def __init__(self, name: str, minpoly: tuple, embedding: complex):
        self.name = name
        self.minpoly = minpoly
        self.degree = len(minpoly) - 1
        self.embedding = embedding


class FieldTower:
    """Immutable chain of algebraic extensions over Q(i) or Q."""

    __slots__ = ("base", "levels", "parent", "_mp_reps")

    def __init__(self, base: str = "gaussian", levels: tuple = (), parent=None):
        if base not in ("gaussian", "rational"):
            raise ValueError("base must be 'gaussian' or 'rational'")
        self.base = base
        self.levels = levels
        self.parent = parent
        # minpoly coefficients as raw reps (exclude leading 1), per level,
        # used by the multiplication reduction.
        self._mp_reps = []
        for lev in levels:
            self._mp_reps.append([c.rep if isinstance(c, FieldElement) else c
                                  for c in lev.minpoly[:-1]])

    # -- identity ------------------------------------------------------
    @property
    def depth(self) -> int:
        return len(self.levels)

    def ext_degree(self) -> int:
        d = 1
        for lev in self.levels:
            d *= lev.degree
        return d

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FieldTower):
            return NotImplemented
        if self.base != other.base or self.depth != other.depth:
            return False
        for a, b in zip(self.levels, other.levels):
            if a.degree != b.degree:
                return False
            if [c.rep if isinstance(c, FieldElement) else c for c in a.minpoly] != \
               [c.rep if isinstance(c, FieldElement) else c for c in b.minpoly]:
                return False
        return True

    def __hash__(self):
        return hash((self.base, self.depth, tuple(lev.degree for lev in self.levels)))

    def is_prefix_of(self, other: "FieldTower") -> bool:
        if self.base != other.base or self.depth > other.depth:
            return False
        t = other
        while t is not None and t.depth > self.depth:
            t = t.parent
        return t is not None and t == self

    def describe(self) -> dict:
        """JSON-safe structural description (generator names + minimal polys)."""
        return {
            "base": self.base,
            "levels": [
                {
                    "name": lev.name,
                    "degree": lev.degree,
                    "minpoly": [_scalar_json(c) for c in lev.minpoly],
                    "embedding": [lev.embedding.real, lev.embedding.imag],
                }
                for lev in self.levels
            ],
        }

    def __repr__(self):
        if not self.levels:
            return f"FieldTower({self.base})"
        names = ",".join(lev.name for lev in self.levels)
        return f"FieldTower({self.base}; {names})"

    # -- element construction ------------------------------------------
    def _zero_rep(self, depth: Optional[int] = None):
        depth = self.depth if depth is None else depth
        if depth == 0:
            return ZERO
        return tuple(self._zero_rep(depth - 1) for _ in range(self.levels[depth - 1].degree))

    def _const_rep(self, g: GaussianRational, depth: Optional[int] = None):
        depth = self.depth if depth is None else depth
        if depth == 0:
            return g
        lev = self.levels[depth - 1]
        return tuple([self._const_rep(g, depth - 1)] +
                     [self._zero_rep(depth - 1) for _ in range(lev.degree - 1)])

    def element(self, x) -> "FieldElement":
        """Coerce x (int, Fraction, GaussianRational, or prefix-tower element)
        into this tower."""
        if isinstance(x, FieldElement):
            if x.tower == self:
                return x if x.tower is self else FieldElement(self, x.rep)
            if x.tower.is_prefix_of(self):
                return FieldElement(self, self._lift_rep(x.rep, x.tower.depth))
            raise TowerMismatch("element does not embed into this tower")
        if isinstance(x, (int, Fraction)):
            x = GaussianRational(x, 0)
        if isinstance(x, GaussianRational):
            if self.base == "rational" and x.im != 0:
                raise TowerMismatch("imaginary constant in a rational-base tower")
            return FieldElement(self, self._const_rep(x))
        raise TypeError(f"cannot coerce {type(x).__name__} into tower")

    def _lift_rep(self, rep, from_depth: int):
        """Embed a rep of the depth-``from_depth`` prefix into this tower."""
        if from_depth == self.depth:
            return rep
        out = rep
        for d in range(from_depth + 1, self.depth + 1):
            lev = self.levels[d - 1]
            out = tuple([out] + [self._zero_rep(d - 1) for _ in range(lev.degree - 1)])
        return out

    def zero(self) -> "FieldElement":
        return FieldElement(self, self._zero_rep())

    def one(self) -> "FieldElement":
        return FieldElement(self, self._const_rep(ONE))

    def gen(self, k: Optional[int] = None) -> "FieldElement":
        """Generator of level k (1-based; default: top level)."""
        if self.depth == 0:
            raise ValueError("trivial tower has no generator")
        k = self.depth if k is None else k
        if not 1 <= k <= self.depth:
            raise ValueError("no such level")
        lev = self.levels[k - 1]
        base_rep = tuple(
            [self._zero_rep(k - 1), self._const_rep(ONE, k - 1)]
            + [self._zero_rep(k - 1) for _ in range(lev.degree - 2)]
        )
        return FieldElement(self, self._lift_rep(base_rep, k))

    # -- extension ------------------------------------------------------
    def adjoin_root(self, minpoly: Sequence, name: Optional[str] = None,
                    depth_cap: Optional[int] = None,
                    degree_cap: Optional[int] = None) -> Tuple["FieldTower", "FieldElement"]:
        """Adjoin a root of the monic irreducible ``minpoly`` (ascending
        coefficients over this tower).  Returns (extended tower, new generator).

        Caps default to the module-wide values, which ``tower_caps`` can
        override for the duration of a computation.
        """
        if depth_cap is None:
            depth_cap = DEFAULT_DEPTH_CAP
        if degree_cap is None:
            degree_cap = DEFAULT_DEGREE_CAP
        coeffs = [self.element(c) for c in minpoly]
        coeffs = tp_trim(coeffs)
        deg = len(coeffs) - 1
        if deg < 1:
            raise NotMonic("minimal polynomial must have degree >= 1")
        if not (coeffs[-1] - self.one()).is_zero():
            raise NotMonic("minimal polynomial must be monic")
        if deg < 2:
            raise ReducibleMinimalPolynomial("degree-1 polynomial adjoins nothing")
        if self.depth + 1 > depth_cap:
            raise TowerDepthExceeded(f"tower depth cap {depth_cap} reached")
        if deg > degree_cap:
            raise ExtensionDegreeExceeded(f"extension degree {deg} exceeds cap {degree_cap}")
        _, factors = factor_univariate(coeffs, self)
        if len(factors) != 1 or factors[0][1] != 1 or tp_deg(factors[0][0]) != deg:
            raise ReducibleMinimalPolynomial(
                "polynomial is reducible over the tower",
                factors=[[str(c) for c in f] for f, _ in factors],
            )
        emb = _chosen_root([complex(c) for c in coeffs])
        lev = TowerLevel(name or f"a{self.depth + 1}", tuple(coeffs), emb)
        new = FieldTower(self.base, self.levels + (lev,), parent=self)
        return new, new.gen()


TRIVIAL = FieldTower("gaussian")
TRIVIAL_RATIONAL = FieldTower("rational")


def _chosen_root(coeffs_complex: List[complex]) -> complex:
    """Deterministic embedding: the root of the (ascending) polynomial that is
    smallest in the rounded (re, im) lexicographic order."""
    arr = np.roots(list(reversed(coeffs_complex)))
    cands = sorted(
        (complex(r) for r in arr),
        key=lambda z: (round(z.real, 10), round(z.imag, 10)),
    )
    return cands[0]


class FieldElement:
    """Element of a FieldTower: nested coordinate vector over the power bases."""

    __slots__ = ("tower", "rep")

    def __init__(self, tower: FieldTower, rep):
        self.tower = tower
        self.rep = rep

    # -- predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return _rep_is_zero(self.rep, self.tower.depth)

    def is_one(self) -> bool:
        return (self - 1).is_zero()

    def is_rational(self) -> bool:
        g = self.as_gaussian_or_none()
        return g is not None and g.im == 0

    # -- conversions ----------------------------------------------------
    def as_gaussian_or_none(self) -> Optional[GaussianRational]:
        """The GaussianRational value if this element lies in the base field."""
        rep = self.rep
        for d in range(self.tower.depth, 0, -1):
            head, rest = rep[0], rep[1:]
            if not all(_rep_is_zero(r, d - 1) for r in rest):
                return None
            rep = head
        return rep

    def as_fraction(self) -> Fraction:
        g = self.as_gaussian_or_none()
        if g is None or g.im != 0:
            raise ValueError("element is not rational")
        return g.re

    def __complex__(self) -> complex:
        return _rep_complex(self.rep, self.tower)

    def sort_key(self):
        return _rep_key(self.rep, self.tower.depth)

    def to_json(self):
        return _rep_json(self.rep, self.tower.depth)

    # -- arithmetic -----------------------------------------------------
    def _align(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self, self.tower.element(other)
        if isinstance(other, FieldElement):
            if other.tower == self.tower:
                return self, other
            if other.tower.is_prefix_of(self.tower):
                return self, self.tower.element(other)
            if self.tower.is_prefix_of(other.tower):
                return other.tower.element(self), other
            raise TowerMismatch("elements of unrelated towers")
        return None, None

    def __add__(self, other):
        a, b = self._align(other)
        if a is None:
            return NotImplemented
        return FieldElement(a.tower, _rep_add(a.rep, b.rep, a.tower.depth))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.tower, _rep_neg(self.rep, self.tower.depth))

    def __sub__(self, other):
        a, b = self._align(other)
        if a is None:
            return NotImplemented
        return FieldElement(a.tower, _rep_add(a.rep, _rep_neg(b.rep, a.tower.depth), a.tower.depth))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._align(other)
        if a is None:
            return NotImplemented
        return FieldElement(a.tower, _rep_mul(a.rep, b.rep, a.tower, a.tower.depth))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise DivisionByZero("inverse of zero field element")
        return FieldElement(self.tower, _rep_inv(self.rep, self.tower))

    def __truediv__(self, other):
        a, b = self._align(other)
        if a is None:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = self.tower.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        try:
            a, b = self._align(other)
        except TowerMismatch:
            return False
        if a is None:
            return NotImplemented
        return a.rep == b.rep

    def __hash__(self):
        return hash((self.tower.depth, _rep_key(self.rep, self.tower.depth)))

    def __repr__(self):
        return f"FieldElement({self})"

    def __str__(self):
        return format_field_element(self)


# -- recursive rep arithmetic -----------------------------------------
def _rep_is_zero(rep, depth: int) -> bool:
    if depth == 0:
        return rep.is_zero()
    return all(_rep_is_zero(r, depth - 1) for r in rep)


def _rep_add(a, b, depth: int):
    if depth == 0:
        return a + b
    return tuple(_rep_add(x, y, depth - 1) for x, y in zip(a, b))


def _rep_neg(a, depth: int):
    if depth == 0:
        return -a
    return tuple(_rep_neg(x, depth - 1) for x in a)


def _rep_mul(a, b, tower: FieldTower, depth: int):
    if depth == 0:
        return a * b
    n = tower.levels[depth - 1].degree
    zero = tower._zero_rep(depth - 1)
    prod = [zero] * (2 * n - 1)
    for i, x in enumerate(a):
        if _rep_is_zero(x, depth - 1):
            continue
        for j, y in enumerate(b):
            if _rep_is_zero(y, depth - 1):
                continue
            prod[i + j] = _rep_add(prod[i + j], _rep_mul(x, y, tower, depth - 1), depth - 1)
    mp = tower._mp_reps[depth - 1]  # low coefficients of the monic minpoly
    for i in range(2 * n - 2, n - 1, -1):
        c = prod[i]
        if _rep_is_zero(c, depth - 1):
            continue
        prod[i] = zero
        for j in range(n):
            prod[i - n + j] = _rep_add(
                prod[i - n + j],
                _rep_neg(_rep_mul(c, mp[j], tower, depth - 1), depth - 1),
                depth - 1,
            )
    return tuple(prod[:n])


def _rep_inv(rep, tower: FieldTower):
    depth = tower.depth
    if depth == 0:
        return rep.inverse()
    prefix = tower.parent if tower.parent is not None else FieldTower(tower.base, tower.levels[:-1])
    a = tp_trim([FieldElement(prefix, r) for r in rep])
    m = list(tower.levels[-1].minpoly[:-1]) + [prefix.one()]
    m = [prefix.element(c) for c in m]
    g, s, _ = tp_xgcd(a, m)
    if tp_deg(g) != 0:
        raise InternalInvariantViolation("minimal polynomial not irreducible (inverse failed)")
    ginv = g[0].inverse()
    inv = [c * ginv for c in s]
    n = tower.levels[-1].degree
    out = [tower._zero_rep(depth - 1)] * n
    for k, c in enumerate(inv[:n]):
        out[k] = c.rep
    return tuple(out)


def _rep_complex(rep, tower: FieldTower) -> complex:
    def go(r, d):
        if d == 0:
            return complex(r)
        z = tower.levels[d - 1].embedding
        acc = 0j
        for c in reversed(r):
            acc = acc * z + go(c, d - 1)
        return acc

    return go(rep, tower.depth)


def _rep_key(rep, depth: int):
    if depth == 0:
        return (rep.re, rep.im)
    return tuple(_rep_key(r, depth - 1) for r in rep)


def _rep_json(rep, depth: int):
    if depth == 0:
        return format_gaussian(rep)
    return [_rep_json(r, depth - 1) for r in rep]


def _scalar_json(c):
    if isinstance(c, FieldElement):
        return c.to_json()
    if isinstance(c, GaussianRational):
        return format_gaussian(c)
    return str(c)


def format_field_element(e: FieldElement) -> str:
    def go(rep, depth):
        if depth == 0:
            return format_gaussian(rep)
        name = e.tower.levels[depth - 1].name
        parts = []
        for k, c in enumerate(rep):
            if _rep_is_zero(c, depth - 1):
                continue
            ctxt = go(c, depth - 1)
            if k == 0:
                parts.append(ctxt)
            else:
                head = name if k == 1 else f"{name}^{k}"
                parts.append(head if ctxt == "1" else f"({ctxt})*{head}")
        if not parts:
            return "0"
        return "+".join(parts).replace("+-", "-")

    return go(e.rep, e.tower.depth)


# =====================================================================
# Dense univariate polynomials over any exact scalar (ascending lists)
# =====================================================================
def tp_trim(p: list) -> list:
    while p and _sc_is_zero(p[-1]):
        p = p[:-1]
    return p


def _sc_is_zero(c) -> bool:
    z = getattr(c, "is_zero", None)
    if z is not None:
        return z()
    return c == 0


def tp_deg(p: list) -> int:
    """Degree; -1 for the zero polynomial."""
    return len(tp_trim(p)) - 1


def tp_is_zero(p: list) -> bool:
    return tp_deg(p) < 0


def tp_add(p: list, q: list) -> list:
    n = max(len(p), len(q))
    out = []
    for k in range(n):
        if k < len(p) and k < len(q):
            out.append(p[k] + q[k])
        elif k < len(p):
            out.append(p[k])
        else:
            out.append(q[k])
    return tp_trim(out)


def tp_neg(p: list) -> list:
    return [-c for c in p]


def tp_sub(p: list, q: list) -> list:
    return tp_add(p, tp_neg(q))


def tp_scale(p: list, c) -> list:
    return tp_trim([x * c for x in p])


def tp_mul(p: list, q: list) -> list:
    p, q = tp_trim(p), tp_trim(q)
    if not p or not q:
        return []
    out = [None] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if _sc_is_zero(a):
            continue
        for j, b in enumerate(q):
            ab = a * b
            out[i + j] = ab if out[i + j] is None else out[i + j] + ab
    zero = p[0] * 0
    return tp_trim([zero if c is None else c for c in out])


def tp_pow(p: list, n: int) -> list:
    out = [p[0] * 0 + 1] if p else [1]
    base = p
    while n:
        if n & 1:
            out = tp_mul(out, base)
        base = tp_mul(base, base)
        n >>= 1
    return out


def tp_divmod(p: list, q: list) -> Tuple[list, list]:
    p, q = tp_trim(list(p)), tp_trim(q)
    if not q:
        raise DivisionByZero("polynomial division by zero")
    dq = len(q) - 1
    lead_inv = _sc_inv(q[-1])
    quot = []
    r = list(p)
    while len(r) - 1 >= dq and r:
        c = r[-1] * lead_inv
        k = len(r) - 1 - dq
        quot.append((k, c))
        for j in range(dq + 1):
            r[k + j] = r[k + j] - c * q[j]
        r = tp_trim(r)
    if not quot:
        return [], tp_trim(r)
    deg_quot = max(k for k, _ in quot)
    zero = q[-1] * 0
    out = [zero] * (deg_quot + 1)
    for k, c in quot:
        out[k] = c
    return tp_trim(out), tp_trim(r)


def _sc_inv(c):
    inv = getattr(c, "inverse", None)
    if inv is not None:
        return inv()
    return 1 / c


def tp_monic(p: list) -> list:
    p = tp_trim(p)
    if not p:
        return p
    return tp_scale(p, _sc_inv(p[-1]))


def tp_gcd(p: list, q: list) -> list:
    a, b = tp_trim(p), tp_trim(q)
    while not tp_is_zero(b):
        _, r = tp_divmod(a, b)
        a, b = b, r
    return tp_monic(a)


def tp_xgcd(a: list, b: list) -> Tuple[list, list, list]:
    """Extended Euclid: returns (g, s, t) with s*a + t*b = g (g not normalized)."""
    a, b = tp_trim(list(a)), tp_trim(list(b))
    one_c = (a or b)[-1] * 0 + 1
    r0, r1 = a, b
    s0, s1 = [one_c], []
    t0, t1 = [], [one_c]
    while not tp_is_zero(r1):
        q, r = tp_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, tp_sub(s0, tp_mul(q, s1))
        t0, t1 = t1, tp_sub(t0, tp_mul(q, t1))
    return r0, s0, t0


def tp_derivative(p: list) -> list:
    return tp_trim([p[k] * k for k in range(1, len(p))])


def tp_eval(p: list, x):
    if not p:
        return x * 0
    acc = p[-1]
    for c in reversed(p[:-1]):
        acc = acc * x + c
    return acc


def tp_compose(p: list, q: list) -> list:
    """p(q(t)) by Horner."""
    if not p:
        return []
    acc = [p[-1]]
    for c in reversed(p[:-1]):
        acc = tp_add(tp_mul(acc, q), [c])
    return acc


def tp_shift(p: list, a) -> list:
    """p(t + a)."""
    one = (p or [a])[-1] * 0 + 1
    return tp_compose(p, [a, one])


def tp_resultant(f: list, g: list):
    """Resultant of two univariate polynomials over a field (exact)."""
    f, g = tp_trim(f), tp_trim(g)
    if not f or not g:
        return (f or g or [0])[0] * 0 if (f or g) else 0
    one = f[-1] * 0 + 1
    res = one
    a, b = f, g
    while True:
        da, db = len(a) - 1, len(b) - 1
        if db == 0:
            return res * (b[0] ** da)
        _, r = tp_divmod(a, b)
        dr = tp_deg(r)
        if dr < 0:
            return res * 0
        sign = -1 if (da % 2 == 1 and db % 2 == 1) else 1
        res = res * (b[-1] ** (da - dr))
        if sign < 0:
            res = -res
        a, b = b, r


# =====================================================================
# Factorization over a tower
# =====================================================================
def factor_univariate(coeffs: Sequence, tower: FieldTower):
    """Full factorization of a univariate polynomial over ``tower``.

    Returns ``(unit, [(monic_irreducible_ascending_coeffs, multiplicity)])``
    with the product of unit and factor powers equal to the input.
    Factors are sorted deterministically (degree, then coefficient order).
    """
    p = tp_trim([tower.element(c) for c in coeffs])
    if not p:
        raise ZeroDivisionError("cannot factor the zero polynomial")
    unit = p[-1]
    if tp_deg(p) == 0:
        return unit, []
    f = tp_monic(p)
    radical, _ = tp_divmod(f, tp_gcd(f, tp_derivative(f)))
    irr = _factor_squarefree(tp_monic(radical), tower)
    out = []
    rem = f
    for h in irr:
        mult = 0
        while True:
            q, r = tp_divmod(rem, h)
            if tp_is_zero(r):
                rem = q
                mult += 1
            else:
                break
        if mult == 0:
            raise InternalInvariantViolation("factor does not divide its polynomial")
        out.append((h, mult))
    if tp_deg(rem) != 0:
        raise InternalInvariantViolation("factorization incomplete")
    out.sort(key=lambda fm: (tp_deg(fm[0]), [c.sort_key() for c in fm[0]]))
    return unit, out


def _factor_squarefree(f: list, tower: FieldTower) -> List[list]:
    if tp_deg(f) <= 1:
        return [f] if tp_deg(f) == 1 else []
    if tower.depth == 0:
        return _factor_base(f, tower)
    return _factor_trager(f, tower)


def _factor_base(f: list, tower: FieldTower) -> List[list]:
    """Factor a squarefree monic polynomial over Q(i) or Q via sympy."""
    import sympy

    t = sympy.Symbol("t")
    expr = 0
    for k, c in enumerate(f):
        g = c.as_gaussian_or_none()
        if g is None:
            raise InternalInvariantViolation("non-constant rep in depth-0 tower")
        expr += (sympy.Rational(g.re.numerator, g.re.denominator)
                 + sympy.Rational(g.im.numerator, g.im.denominator) * sympy.I) * t ** k
    domain = "QQ_I" if tower.base == "gaussian" else "QQ"
    poly = sympy.Poly(expr, t, domain=domain)
    _, fac = poly.factor_list()
    out = []
    for g, mult in fac:
        if mult != 1:
            raise InternalInvariantViolation("sympy returned a repeated factor of a squarefree input")
        ge = sympy.expand(g.as_expr())
        deg = sympy.degree(ge, t)
        cs = []
        for k in range(int(deg) + 1):
            ck = sympy.expand(ge.coeff(t, k))
            re, im = ck.as_real_imag()
            cs.append(tower.element(GaussianRational(
                Fraction(int(sympy.Rational(re).p), int(sympy.Rational(re).q)),
                Fraction(int(sympy.Rational(im).p), int(sympy.Rational(im).q)),
            )))
        out.append(tp_monic(cs))
    return out


def _factor_trager(f: list, tower: FieldTower) -> List[list]:
    """Trager norm descent: factor squarefree monic f over K(alpha) given
    factorization over K (= the tower one level down)."""
    prefix = tower.parent if tower.parent is not None else FieldTower(tower.base, tower.levels[:-1])
    alpha = tower.gen()
    m = [prefix.element(c) for c in tower.levels[-1].minpoly]
    shifts = [0, 1, -1, 2, -2, 3, -3, 4, -4, 5, -5]
    for c in shifts:
        shifted = tp_compose(f, [alpha * (-c), tower.one()]) if c else f
        norm = _norm_resultant(shifted, m, tower, prefix)
        if tp_deg(tp_gcd(norm, tp_derivative(norm))) == 0:
            break
    else:
        raise InternalInvariantViolation("no squarefree norm shift found")
    norm_factors = _factor_squarefree(tp_monic(norm), prefix)
    out = []
    for nf in norm_factors:
        lifted = [tower.element(x) for x in nf]
        if c:
            lifted = tp_compose(lifted, [alpha * c, tower.one()])
        h = tp_gcd(f, lifted)
        if tp_deg(h) >= 1:
            out.append(tp_monic(h))
    total = sum(tp_deg(h) for h in out)
    if total != tp_deg(f):
        raise InternalInvariantViolation("Trager descent lost factors")
    return out


def _norm_resultant(g: list, m: list, tower: FieldTower, prefix: FieldTower) -> list:
    """N(t) = Res_u(m(u), G(u, t)) in K[t], where G is g with the top generator
    replaced by the variable u; computed by evaluation/interpolation in t."""
    deg_bound = tp_deg(g) * (len(m) - 1)
    points = []
    values = []
    j = 0
    while len(points) <= deg_bound:
        x = prefix.element(j)
        gx = tp_eval(g, tower.element(j))  # element of tower
        pu = tp_trim([FieldElement(prefix, r) for r in gx.rep])
        rv = tp_resultant(m, pu) if pu else prefix.zero()
        points.append(x)
        values.append(rv if isinstance(rv, FieldElement) else prefix.element(rv))
        j += 1
    return _interpolate(points, values, prefix)


def _interpolate(xs: list, ys: list, field: FieldTower) -> list:
    """Lagrange interpolation over an exact field (ascending coefficients)."""
    n = len(xs)
    acc: list = []
    for i in range(n):
        num = [field.one()]
        denom = field.one()
        for j in range(n):
            if j == i:
                continue
            num = tp_mul(num, [-xs[j], field.one()])
            denom = denom * (xs[i] - xs[j])
        acc = tp_add(acc, tp_scale(num, ys[i] * denom.inverse()))
    return acc


def roots_in_tower(coeffs: Sequence, tower: FieldTower):
    """Roots of a univariate polynomial that lie in ``tower``.

    Returns ``(rational_roots, irreducible_factors)`` where rational_roots is a
    list of (root FieldElement, multiplicity) and irreducible_factors is a list
    of (monic coefficients, multiplicity) for the factors of degree >= 2.
    """
    _, factors = factor_univariate(coeffs, tower)
    roots = []
    hard = []
    for h, mult in factors:
        if tp_deg(h) == 1:
            roots.append((-h[0], mult))
        else:
            hard.append((h, mult))
    return roots, hard
