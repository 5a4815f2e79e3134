"""Sparse multivariate polynomials, truncated power series, and plane germs.

MultiPoly is a dict from exponent tuples to nonzero exact scalars
(GaussianRational or tower FieldElement); all arithmetic is exact and
coefficient coercion across compatible towers rides on the scalar operators.
TruncatedSeries wraps a polynomial payload together with the order through
which it is trusted; every operation propagates the minimum trusted order.
VectorFieldGerm and OneFormGerm are thin wrappers holding components, with
the classical plane duality  A dx + B dy  <->  B d/dx - A d/dy  and wedge
products used throughout the resolution and integrability checks.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import (
    DivisionByZero,
    InternalInvariantViolation,
    VariableCountMismatch,
    ZeroInput,
)
from .scalars import GaussianRational, format_gaussian

Exponent = Tuple[int, ...]

DEFAULT_NAMES = {1: ("x",), 2: ("x", "y"), 3: ("x", "y", "z")}


def _coerce_scalar(c):
    if isinstance(c, (int, Fraction)):
        return GaussianRational(c, 0)
    return c


def _scalar_zero(c) -> bool:
    z = getattr(c, "is_zero", None)
    if z is not None:
        return z()
    return c == 0


def scalar_to_json(c):
    to = getattr(c, "to_json", None)
    if to is not None:
        return to()
    if isinstance(c, GaussianRational):
        return format_gaussian(c)
    return str(c)


class MultiPoly:
    """Sparse exact polynomial in a fixed number of variables."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Optional[Dict[Exponent, object]] = None):
        self.nvars = nvars
        pruned: Dict[Exponent, object] = {}
        if terms:
            for e, c in terms.items():
                c = _coerce_scalar(c)
                if not _scalar_zero(c):
                    if len(e) != nvars:
                        raise VariableCountMismatch(
                            f"exponent {e} does not have {nvars} entries")
                    pruned[tuple(e)] = c
        self.terms = pruned

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls(nvars, {})

    @classmethod
    def constant(cls, c, nvars: int) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, k: int, nvars: int) -> "MultiPoly":
        e = [0] * nvars
        e[k] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def monomial(cls, c, exps: Sequence[int]) -> "MultiPoly":
        return cls(len(exps), {tuple(exps): c})

    # -- structure ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def total_degree(self) -> int:
        """Largest total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def order_at_origin(self) -> Union[int, float]:
        """Smallest total degree of a term; +inf for the zero polynomial."""
        if not self.terms:
            return math.inf
        return min(sum(e) for e in self.terms)

    def homogeneous_component(self, d: int) -> "MultiPoly":
        return MultiPoly(self.nvars,
                         {e: c for e, c in self.terms.items() if sum(e) == d})

    def truncate(self, order: int) -> "MultiPoly":
        return MultiPoly(self.nvars,
                         {e: c for e, c in self.terms.items() if sum(e) <= order})

    def coefficient(self, exps: Sequence[int]):
        return self.terms.get(tuple(exps), GaussianRational(0, 0))

    def constant_term(self):
        return self.coefficient((0,) * self.nvars)

    def degree_in(self, var: int) -> int:
        if not self.terms:
            return -1
        return max(e[var] for e in self.terms)

    def order_in(self, var: int) -> Union[int, float]:
        if not self.terms:
            return math.inf
        return min(e[var] for e in self.terms)

    def coeffs_in(self, var: int) -> Dict[int, "MultiPoly"]:
        """Group terms by the exponent of one variable; values keep nvars with
        that exponent zeroed."""
        out: Dict[int, Dict[Exponent, object]] = {}
        for e, c in self.terms.items():
            k = e[var]
            e0 = list(e)
            e0[var] = 0
            out.setdefault(k, {})[tuple(e0)] = c
        return {k: MultiPoly(self.nvars, t) for k, t in out.items()}

    def sorted_terms(self) -> List[Tuple[Exponent, object]]:
        """Deterministic graded-lex term order: ascending total degree, then
        earlier variables with higher exponents first (x^2 before x*y before y^2)."""
        return sorted(self.terms.items(),
                      key=lambda ec: (sum(ec[0]), tuple(-k for k in ec[0])))

    # -- arithmetic -----------------------------------------------------
    def _check(self, other: "MultiPoly"):
        if self.nvars != other.nvars:
            raise VariableCountMismatch(
                f"polynomials in {self.nvars} and {other.nvars} variables")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)) or hasattr(other, "tower"):
            other = MultiPoly.constant(other, self.nvars)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = out[e] + c
                if _scalar_zero(s):
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return MultiPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)) or hasattr(other, "tower"):
            other = MultiPoly.constant(other, self.nvars)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)) or hasattr(other, "tower"):
            return self.scale(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check(other)
        out: Dict[Exponent, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                p = c1 * c2
                if e in out:
                    s = out[e] + p
                    if _scalar_zero(s):
                        del out[e]
                    else:
                        out[e] = s
                else:
                    out[e] = p
        return MultiPoly(self.nvars, out)

    __rmul__ = __mul__

    def scale(self, c) -> "MultiPoly":
        c = _coerce_scalar(c)
        if _scalar_zero(c):
            return MultiPoly.zero(self.nvars)
        return MultiPoly(self.nvars, {e: v * c for e, v in self.terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = MultiPoly.constant(1, self.nvars)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = MultiPoly.constant(other, self.nvars)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.keys())))

    # -- calculus & substitution ---------------------------------------
    def derivative(self, var: int) -> "MultiPoly":
        out: Dict[Exponent, object] = {}
        for e, c in self.terms.items():
            k = e[var]
            if k == 0:
                continue
            e2 = list(e)
            e2[var] = k - 1
            out[tuple(e2)] = c * k
        return MultiPoly(self.nvars, out)

    def evaluate(self, values: Sequence):
        """Evaluate at scalar values (one per variable)."""
        if len(values) != self.nvars:
            raise VariableCountMismatch("wrong number of values")
        vals = [_coerce_scalar(v) for v in values]
        acc = None
        for e, c in self.sorted_terms():
            term = c
            for k, v in zip(e, vals):
                if k:
                    term = term * (v ** k) if k > 1 else term * v
            acc = term if acc is None else acc + term
        return GaussianRational(0, 0) if acc is None else acc

    def substitute(self, polys: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute a polynomial for each variable (all with equal nvars)."""
        if len(polys) != self.nvars:
            raise VariableCountMismatch("wrong number of substitution polynomials")
        nv = polys[0].nvars
        acc = MultiPoly.zero(nv)
        pow_cache: List[Dict[int, MultiPoly]] = [dict() for _ in polys]
        for e, c in self.sorted_terms():
            term = MultiPoly.constant(c, nv)
            for var, k in enumerate(e):
                if not k:
                    continue
                cache = pow_cache[var]
                if k not in cache:
                    cache[k] = polys[var] ** k
                term = term * cache[k]
            acc = acc + term
        return acc

    def translate(self, shifts: Sequence) -> "MultiPoly":
        """Shift the origin: substitute x_k -> x_k + shift_k."""
        polys = []
        for k, s in enumerate(shifts):
            v = MultiPoly.variable(k, self.nvars)
            polys.append(v + MultiPoly.constant(s, self.nvars))
        return self.substitute(polys)

    def divide_by_var_power(self, var: int, k: int) -> "MultiPoly":
        """Exact division by x_var^k; raises if any term has lower exponent."""
        if k == 0:
            return self
        out: Dict[Exponent, object] = {}
        for e, c in self.terms.items():
            if e[var] < k:
                raise InternalInvariantViolation(
                    f"term {e} not divisible by variable {var} power {k}")
            e2 = list(e)
            e2[var] -= k
            out[tuple(e2)] = c
        return MultiPoly(self.nvars, out)

    def map_coefficients(self, fn) -> "MultiPoly":
        return MultiPoly(self.nvars, {e: fn(c) for e, c in self.terms.items()})

    def numeric(self) -> "MultiPoly":
        """Coefficients as complex floats (for numeric pipelines)."""
        return MultiPoly(self.nvars, {e: complex(c) for e, c in self.terms.items()})

    # -- presentation ---------------------------------------------------
    def to_json(self):
        return [[list(e), scalar_to_json(c)] for e, c in self.sorted_terms()]

    def __str__(self):
        return render_poly(self)

    def __repr__(self):
        return f"MultiPoly({self})"


def render_poly(p: MultiPoly, names: Optional[Sequence[str]] = None) -> str:
    """Canonical text rendering with graded-lex term order."""
    if p.is_zero():
        return "0"
    names = names or DEFAULT_NAMES.get(p.nvars) or tuple(f"x{k+1}" for k in range(p.nvars))
    parts = []
    for e, c in p.sorted_terms():
        mono = "*".join(
            (names[k] if d == 1 else f"{names[k]}^{d}")
            for k, d in enumerate(e) if d
        )
        ctxt = scalar_to_json(c)
        if not isinstance(ctxt, str):
            ctxt = str(c)
        compound = any(s in ctxt[1:] for s in "+-") or "*" in ctxt
        if not mono:
            parts.append(f"({ctxt})" if compound else ctxt)
        elif ctxt == "1":
            parts.append(mono)
        elif ctxt == "-1":
            parts.append(f"-{mono}")
        elif compound:
            parts.append(f"({ctxt})*{mono}")
        else:
            parts.append(f"{ctxt}*{mono}")
    out = parts[0]
    for piece in parts[1:]:
        out += piece if piece.startswith("-") else "+" + piece
    return out


class TruncatedSeries:
    """Polynomial payload trusted through total degree ``order``.

    Arithmetic keeps the minimum trusted order of the operands and truncates
    the payload accordingly, so accuracy claims never silently inflate.
    """

    __slots__ = ("poly", "order")

    def __init__(self, poly: MultiPoly, order: int):
        if order < 0:
            raise ZeroInput("series order must be nonnegative")
        self.poly = poly.truncate(order)
        self.order = order

    @classmethod
    def from_poly(cls, poly: MultiPoly, order: int) -> "TruncatedSeries":
        return cls(poly, order)

    @property
    def nvars(self) -> int:
        return self.poly.nvars

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def _mix(self, other):
        if isinstance(other, TruncatedSeries):
            return other.poly, min(self.order, other.order)
        if isinstance(other, MultiPoly):
            return other, self.order
        if isinstance(other, (int, Fraction, GaussianRational)) or hasattr(other, "tower"):
            return MultiPoly.constant(other, self.nvars), self.order
        return None, None

    def __add__(self, other):
        p, n = self._mix(other)
        if p is None:
            return NotImplemented
        return TruncatedSeries(self.poly + p, n)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self.poly, self.order)

    def __sub__(self, other):
        p, n = self._mix(other)
        if p is None:
            return NotImplemented
        return TruncatedSeries(self.poly - p, n)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        p, n = self._mix(other)
        if p is None:
            return NotImplemented
        return TruncatedSeries(self.poly * p, n)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = TruncatedSeries(MultiPoly.constant(1, self.nvars), self.order)
        for _ in range(k):
            out = out * self
        return out

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse of a unit series (nonzero constant term)."""
        c0 = self.poly.constant_term()
        if _scalar_zero(c0):
            raise DivisionByZero("series has no constant term")
        c0inv = c0.inverse() if hasattr(c0, "inverse") else 1 / c0
        v = (self.poly - MultiPoly.constant(c0, self.nvars)).scale(c0inv)
        # Neumann sum 1 - v + v^2 - ... for 1/(1+v), truncated
        acc = MultiPoly.constant(1, self.nvars)
        power = MultiPoly.constant(1, self.nvars)
        sign = -1
        for _ in range(self.order):
            power = (power * v).truncate(self.order)
            if power.is_zero():
                break
            acc = acc + power.scale(sign)
            sign = -sign
        return TruncatedSeries(acc.scale(c0inv), self.order)

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            n = min(self.order, other.order)
            return (self.poly - other.poly).truncate(n).is_zero()
        return NotImplemented

    def __str__(self):
        return f"{self.poly} + O(deg {self.order + 1})"

    def __repr__(self):
        return f"TruncatedSeries({self})"


class VectorFieldGerm:
    """Polynomial vector field germ: one component polynomial per variable."""

    __slots__ = ("components",)

    def __init__(self, components: Sequence[MultiPoly]):
        components = tuple(components)
        if not components:
            raise ZeroInput("vector field needs at least one component")
        nv = components[0].nvars
        if any(p.nvars != nv for p in components):
            raise VariableCountMismatch("component variable counts differ")
        if len(components) != nv:
            raise VariableCountMismatch(
                f"{len(components)} components for {nv} variables")
        self.components = components

    @property
    def nvars(self) -> int:
        return self.components[0].nvars

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.components)

    def order_at_origin(self) -> Union[int, float]:
        return min(p.order_at_origin() for p in self.components)

    def is_singular_at_origin(self) -> bool:
        return all(_scalar_zero(p.constant_term()) for p in self.components)

    def linear_part_matrix(self) -> List[List[object]]:
        """Jacobian at the origin: rows are components, columns variables."""
        out = []
        for p in self.components:
            row = []
            for j in range(self.nvars):
                e = [0] * self.nvars
                e[j] = 1
                row.append(p.coefficient(e))
            out.append(row)
        return out

    def jet(self, order: int) -> "VectorFieldGerm":
        return VectorFieldGerm([p.truncate(order) for p in self.components])

    def homogeneous_component(self, d: int) -> "VectorFieldGerm":
        return VectorFieldGerm([p.homogeneous_component(d) for p in self.components])

    def translate(self, shifts: Sequence) -> "VectorFieldGerm":
        return VectorFieldGerm([p.translate(shifts) for p in self.components])

    def scale(self, c) -> "VectorFieldGerm":
        return VectorFieldGerm([p.scale(c) for p in self.components])

    def __add__(self, other):
        if not isinstance(other, VectorFieldGerm):
            return NotImplemented
        return VectorFieldGerm([a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other):
        if not isinstance(other, VectorFieldGerm):
            return NotImplemented
        return VectorFieldGerm([a - b for a, b in zip(self.components, other.components)])

    def __eq__(self, other):
        if not isinstance(other, VectorFieldGerm):
            return NotImplemented
        return all((a - b).is_zero() for a, b in zip(self.components, other.components))

    def apply_to(self, f: MultiPoly) -> MultiPoly:
        """Lie derivative of a function: sum of component * partial."""
        acc = MultiPoly.zero(self.nvars)
        for k, p in enumerate(self.components):
            acc = acc + p * f.derivative(k)
        return acc

    def to_json(self):
        return [p.to_json() for p in self.components]

    def __str__(self):
        markers = {2: ("ddx", "ddy"), 3: ("ddx", "ddy", "ddz")}.get(
            self.nvars, tuple(f"dd{k+1}" for k in range(self.nvars)))
        parts = []
        for p, m in zip(self.components, markers):
            if p.is_zero():
                continue
            parts.append(f"({p})*{m}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"VectorFieldGerm({self})"


class OneFormGerm:
    """Polynomial 1-form A dx + B dy in the plane."""

    __slots__ = ("a", "b")

    def __init__(self, a: MultiPoly, b: MultiPoly):
        if a.nvars != 2 or b.nvars != 2:
            raise VariableCountMismatch("1-forms are planar (2 variables)")
        self.a = a
        self.b = b

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def order_at_origin(self) -> Union[int, float]:
        return min(self.a.order_at_origin(), self.b.order_at_origin())

    def jet(self, order: int) -> "OneFormGerm":
        return OneFormGerm(self.a.truncate(order), self.b.truncate(order))

    def scale(self, c) -> "OneFormGerm":
        return OneFormGerm(self.a.scale(c), self.b.scale(c))

    def __eq__(self, other):
        if not isinstance(other, OneFormGerm):
            return NotImplemented
        return (self.a - other.a).is_zero() and (self.b - other.b).is_zero()

    def wedge_with_df(self, f: MultiPoly) -> MultiPoly:
        """Coefficient of (A dx + B dy) ^ df  in dx^dy:  A f_y - B f_x."""
        return self.a * f.derivative(1) - self.b * f.derivative(0)

    def to_json(self):
        return {"dx": self.a.to_json(), "dy": self.b.to_json()}

    def __str__(self):
        parts = []
        if not self.a.is_zero():
            parts.append(f"({self.a})*dx")
        if not self.b.is_zero():
            parts.append(f"({self.b})*dy")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"OneFormGerm({self})"


def coefficient_tower(*polys):
    """Deepest FieldTower appearing among the coefficients, or None if all
    coefficients are plain Gaussian rationals."""
    best = None
    for p in polys:
        for c in p.terms.values():
            t = getattr(c, "tower", None)
            if t is not None and (best is None or t.depth > best.depth):
                best = t
    return best


def lift_poly(p: MultiPoly, tower) -> MultiPoly:
    """Coerce every coefficient into ``tower``."""
    return p.map_coefficients(tower.element)


def dualize(obj):
    """Swap between the plane 1-form A dx + B dy and its kernel vector field
    B d/dx - A d/dy; applying it twice returns the original object."""
    if isinstance(obj, OneFormGerm):
        return VectorFieldGerm([obj.b, -obj.a])
    if isinstance(obj, VectorFieldGerm):
        if obj.nvars != 2:
            raise VariableCountMismatch("duality is planar (2 variables)")
        f, g = obj.components
        return OneFormGerm(-g, f)
    raise TypeError("dualize expects a planar 1-form or vector field")


def wedge(x1: VectorFieldGerm, x2: VectorFieldGerm) -> MultiPoly:
    """Determinant pairing of two planar fields: F1*G2 - G1*F2."""
    if x1.nvars != 2 or x2.nvars != 2:
        raise VariableCountMismatch("wedge is planar (2 variables)")
    f1, g1 = x1.components
    f2, g2 = x2.components
    return f1 * g2 - g1 * f2
