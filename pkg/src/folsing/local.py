"""Local analysis at a plane singularity: linear classification, resonance
detection, eigenvalue convex-hull domains, and intersection multiplicities.

The classification is driven entirely by the exact trace/determinant invariant
s = tr^2 / det of the linear part, so eigenvalues never need to be extracted
for the decision; integer-ratio and rational-negative-ratio cases reduce to
exact rational square-root tests.  When s lives in a proper extension tower
the (rare) realness/sign decisions fall back to the numeric embedding and the
result is flagged as such.

Intersection multiplicity of two plane curves at the origin is computed by a
deterministic shear followed by the order of vanishing of the y-resultant,
after stripping any common factor (a common branch through the origin gives
multiplicity infinity).
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import (
    InternalInvariantViolation,
    WrongClass,
    ZeroInput,
)
from .poly import (
    MultiPoly,
    OneFormGerm,
    VectorFieldGerm,
    coefficient_tower,
    dualize,
    lift_poly,
)
from .scalars import GaussianRational
from .towers import (
    TRIVIAL,
    FieldElement,
    FieldTower,
    tp_deg,
    tp_divmod,
    tp_gcd,
    tp_is_zero,
    tp_mul,
    tp_resultant,
    tp_scale,
    tp_trim,
)

NUMERIC_TOL = Fraction(1, 10 ** 9)

# classification tags
REGULAR = "Regular"
SIMPLE_POINCARE_NONRESONANT = "SimplePoincareNonresonant"
SIMPLE_RESONANT_RATIO_N = "SimpleResonantRatioN"
SIEGEL_RATIONAL = "SiegelRational"
SIEGEL_IRRATIONAL = "SiegelIrrational"
HYPERBOLIC = "Hyperbolic"
SADDLE_NODE = "SaddleNode"
NILPOTENT = "Nilpotent"
DEGENERATE = "Degenerate"

FINAL_TAGS = {
    REGULAR,
    SIMPLE_POINCARE_NONRESONANT,
    SIEGEL_RATIONAL,
    SIEGEL_IRRATIONAL,
    HYPERBOLIC,
    SADDLE_NODE,
}


def _as_scalar(c):
    if isinstance(c, (int, Fraction)):
        return GaussianRational(c, 0)
    return c


def _is_zero(c) -> bool:
    z = getattr(c, "is_zero", None)
    return z() if z is not None else c == 0


def _as_gaussian(c) -> Optional[GaussianRational]:
    """The Gaussian-rational value of an exact scalar, or None."""
    c = _as_scalar(c)
    if isinstance(c, GaussianRational):
        return c
    if isinstance(c, FieldElement):
        return c.as_gaussian_or_none()
    return None


def fraction_sqrt(q: Fraction) -> Optional[Fraction]:
    """Exact nonnegative square root of a rational, or None if irrational."""
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


class SingularityClass:
    """Result of the linear classification at a singular point."""

    __slots__ = ("tag", "order", "trace", "det", "s", "ratio", "resonant_n",
                 "siegel_pair", "ratio_positive_real", "numeric_decision")

    def __init__(self, tag, order, trace=None, det=None, s=None, ratio=None,
                 resonant_n=None, siegel_pair=None, ratio_positive_real=None,
                 numeric_decision=False):
        self.tag = tag
        self.order = order
        self.trace = trace
        self.det = det
        self.s = s
        self.ratio = ratio
        self.resonant_n = resonant_n
        self.siegel_pair = siegel_pair
        self.ratio_positive_real = ratio_positive_real
        self.numeric_decision = numeric_decision

    def is_final(self) -> bool:
        return self.tag in FINAL_TAGS

    def to_json(self):
        from .poly import scalar_to_json

        out = {"tag": self.tag, "order": (None if self.order == math.inf else self.order)}
        if self.trace is not None:
            out["trace"] = scalar_to_json(_as_scalar(self.trace))
        if self.det is not None:
            out["det"] = scalar_to_json(_as_scalar(self.det))
        if self.s is not None:
            out["s"] = scalar_to_json(_as_scalar(self.s))
        if self.ratio is not None:
            out["ratio"] = str(self.ratio)
        if self.resonant_n is not None:
            out["resonant_n"] = self.resonant_n
        if self.siegel_pair is not None:
            out["siegel_pair"] = list(self.siegel_pair)
        if self.ratio_positive_real is not None:
            out["ratio_positive_real"] = self.ratio_positive_real
        if self.numeric_decision:
            out["numeric_decision"] = True
        return out

    def __repr__(self):
        extra = ""
        if self.resonant_n is not None:
            extra = f"(n={self.resonant_n})"
        elif self.siegel_pair is not None:
            extra = f"(m:n={self.siegel_pair[0]}:{self.siegel_pair[1]})"
        return f"SingularityClass({self.tag}{extra})"


def classify_singularity(obj, point: Optional[Sequence] = None) -> SingularityClass:
    """Classify a planar vector field (or 1-form, via duality) at a point
    (default: the origin) from the exact invariant s = trace^2 / det."""
    if isinstance(obj, OneFormGerm):
        obj = dualize(obj)
    if not isinstance(obj, VectorFieldGerm):
        raise TypeError("expected a vector field or 1-form")
    vf = obj
    if point is not None:
        vf = vf.translate(list(point))
    if vf.is_zero():
        raise ZeroInput("identically zero vector field")
    if not vf.is_singular_at_origin():
        return SingularityClass(REGULAR, 0)
    order = vf.order_at_origin()
    j = vf.linear_part_matrix()
    a, b = j[0]
    c, d = j[1]
    if all(_is_zero(v) for v in (a, b, c, d)):
        return SingularityClass(DEGENERATE, order)
    tr = _as_scalar(a) + _as_scalar(d)
    det = _as_scalar(a) * _as_scalar(d) - _as_scalar(b) * _as_scalar(c)
    if _is_zero(det):
        if _is_zero(tr):
            return SingularityClass(NILPOTENT, order, trace=tr, det=det)
        return SingularityClass(SADDLE_NODE, order, trace=tr, det=det)
    s = (tr * tr) / det
    g = _as_gaussian(s)
    if g is not None:
        if g.im != 0:
            return SingularityClass(HYPERBOLIC, order, trace=tr, det=det, s=s)
        return _classify_from_rational_s(g.re, order, tr, det, s)
    # s lives strictly above the rationals: integer or rational ratios are
    # impossible exactly; only realness and sign need the numeric embedding.
    z = complex(s)
    if abs(z.imag) > float(NUMERIC_TOL):
        return SingularityClass(HYPERBOLIC, order, trace=tr, det=det, s=s,
                                numeric_decision=True)
    x = z.real
    if x > 4:
        return SingularityClass(SIMPLE_POINCARE_NONRESONANT, order, trace=tr,
                                det=det, s=s, ratio_positive_real=True,
                                numeric_decision=True)
    if x > 0:
        return SingularityClass(HYPERBOLIC, order, trace=tr, det=det, s=s,
                                numeric_decision=True)
    return SingularityClass(SIEGEL_IRRATIONAL, order, trace=tr, det=det, s=s,
                            numeric_decision=True)


def _classify_from_rational_s(q: Fraction, order, tr, det, s) -> SingularityClass:
    if q > 4 or q == 4:
        disc = q * (q - 4)
        root = fraction_sqrt(disc)
        if root is not None:
            n1 = (q - 2 + root) / 2
            if n1.denominator == 1 and n1 >= 1:
                n = int(n1)
                return SingularityClass(SIMPLE_RESONANT_RATIO_N, order, trace=tr,
                                        det=det, s=s, ratio=Fraction(n),
                                        resonant_n=n, ratio_positive_real=True)
            # positive rational non-integer ratio: still nonresonant
            return SingularityClass(SIMPLE_POINCARE_NONRESONANT, order, trace=tr,
                                    det=det, s=s, ratio=n1,
                                    ratio_positive_real=True)
        return SingularityClass(SIMPLE_POINCARE_NONRESONANT, order, trace=tr,
                                det=det, s=s, ratio_positive_real=True)
    if q > 0:
        return SingularityClass(HYPERBOLIC, order, trace=tr, det=det, s=s)
    disc = q * (q - 4)
    root = fraction_sqrt(disc)
    if root is None:
        return SingularityClass(SIEGEL_IRRATIONAL, order, trace=tr, det=det, s=s)
    r1 = (q - 2 - root) / 2
    r2 = (q - 2 + root) / 2
    r = r1 if abs(r1) >= 1 else r2
    m, n = abs(r.numerator), r.denominator
    return SingularityClass(SIEGEL_RATIONAL, order, trace=tr, det=det, s=s,
                            ratio=r, siegel_pair=(m, n))


def eigen_pair(vf: VectorFieldGerm, adjoin: bool = True,
               tower: Optional[FieldTower] = None):
    """Exact eigenvalues of the linear part at the origin.

    Returns (tower, lambda1, lambda2).  If the characteristic polynomial is
    irreducible over the coefficients' tower and ``adjoin`` is set, a root is
    adjoined (one extension); otherwise NotSingular/ValueError style errors
    propagate from the tower layer.
    """
    j = vf.linear_part_matrix()
    a, b = j[0]
    c, d = j[1]
    base = tower or coefficient_tower(*vf.components) or TRIVIAL
    tr = base.element(_as_scalar(a)) + base.element(_as_scalar(d))
    det = base.element(_as_scalar(a)) * base.element(_as_scalar(d)) \
        - base.element(_as_scalar(b)) * base.element(_as_scalar(c))
    # t^2 - tr t + det
    char = [det, -tr, base.one()]
    from .towers import roots_in_tower

    roots, hard = roots_in_tower(char, base)
    if roots:
        if len(roots) == 1 and roots[0][1] == 2:
            lam = roots[0][0]
            return base, lam, lam
        if len(roots) == 2:
            ordered = sorted((r for r, _ in roots), key=lambda e: e.sort_key())
            return base, ordered[1], ordered[0]
    if not adjoin:
        raise WrongClass("characteristic polynomial does not split over the tower")
    mp, _ = hard[0]
    ext, lam1 = base.adjoin_root(mp, name=f"e{base.depth + 1}")
    lam2 = ext.element(tr) - lam1
    return ext, lam1, lam2


def detect_resonances(lambdas: Sequence, max_degree: int) -> List[Tuple[int, Tuple[int, ...]]]:
    """All resonance relations  lambda_i = sum_j q_j lambda_j  with
    multi-indices Q of total degree 2..max_degree.

    Returns sorted (i, Q) pairs with 1-based component index i.
    """
    lams = [_as_scalar(v) for v in lambdas]
    n = len(lams)
    out = []
    for total in range(2, max_degree + 1):
        for q in _compositions(total, n):
            acc = None
            for qj, lj in zip(q, lams):
                if qj == 0:
                    continue
                term = lj * qj
                acc = term if acc is None else acc + term
            for i in range(n):
                delta = acc - lams[i]
                if _is_zero(delta):
                    out.append((i + 1, q))
    out.sort(key=lambda iq: (iq[0], sum(iq[1]), iq[1]))
    return out


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


# ---------------------------------------------------------------------
# Eigenvalue domains (convex position of the spectrum)
# ---------------------------------------------------------------------
class DomainResult:
    __slots__ = ("domain", "zero_position", "numeric_decision")

    def __init__(self, domain: str, zero_position: str, numeric_decision: bool = False):
        self.domain = domain
        self.zero_position = zero_position
        self.numeric_decision = numeric_decision

    def to_json(self):
        out = {"domain": self.domain, "zero_position": self.zero_position}
        if self.numeric_decision:
            out["numeric_decision"] = True
        return out

    def __repr__(self):
        return f"DomainResult({self.domain}, zero {self.zero_position})"


def _to_points(lambdas) -> Tuple[List[Tuple[Fraction, Fraction]], bool]:
    pts = []
    numeric = False
    for v in lambdas:
        g = _as_gaussian(v)
        if g is not None:
            pts.append((g.re, g.im))
        else:
            z = complex(v)
            pts.append((Fraction(z.real), Fraction(z.imag)))
            numeric = True
    return pts, numeric


def _dot(p, u) -> Fraction:
    return p[0] * u[0] + p[1] * u[1]


def _halfplane_exists(points, strict: bool) -> bool:
    """Does a direction u exist with dot(p, u) > 0 (or >= 0) for all points?"""
    if not points:
        return True
    if strict:
        cands = [(a[0] + b[0], a[1] + b[1])
                 for a, b in itertools.combinations_with_replacement(points, 2)]
    else:
        cands = []
        for p in points:
            cands.extend([(-p[1], p[0]), (p[1], -p[0]), p])
    for u in cands:
        if u == (Fraction(0), Fraction(0)):
            continue
        vals = [_dot(p, u) for p in points]
        if strict and all(v > 0 for v in vals):
            return True
        if not strict and all(v >= 0 for v in vals):
            return True
    return False


def domain_classification(lambdas: Sequence) -> DomainResult:
    """Position of 0 relative to the convex hull of the eigenvalues:
    outside -> 'poincare'; on the hull boundary -> 'siegel'; in the relative
    interior -> 'strict_siegel'.  Exact for Gaussian-rational spectra."""
    if not lambdas:
        raise ZeroInput("empty spectrum")
    pts, numeric = _to_points(lambdas)
    zero = (Fraction(0), Fraction(0))
    nonzero = [p for p in pts if p != zero]
    has_zero = len(nonzero) < len(pts)
    if not nonzero:
        return DomainResult("siegel", "boundary", numeric)
    if not has_zero and _halfplane_exists(nonzero, strict=True):
        return DomainResult("poincare", "outside", numeric)
    # 0 is in the hull; decide boundary vs relative interior
    collinear = all(
        a[0] * b[1] - a[1] * b[0] == 0
        for a, b in itertools.combinations(nonzero, 2)
    )
    if collinear:
        v = nonzero[0]
        signs = {(_dot(p, v) > 0) for p in nonzero}
        if len(signs) == 2:
            return DomainResult("strict_siegel", "interior", numeric)
        return DomainResult("siegel", "boundary", numeric)
    if _halfplane_exists(nonzero, strict=False):
        return DomainResult("siegel", "boundary", numeric)
    return DomainResult("strict_siegel", "interior", numeric)


def separating_line_exists(lambdas: Sequence, index: int = 0) -> bool:
    """Is there a line through 0 with lambda_index strictly on one side and
    every other eigenvalue strictly on the other?"""
    pts, _ = _to_points(lambdas)
    sep = [pts[index]] + [(-p[0], -p[1]) for k, p in enumerate(pts) if k != index]
    zero = (Fraction(0), Fraction(0))
    if any(p == zero for p in sep):
        return False
    return _halfplane_exists(sep, strict=True)


# ---------------------------------------------------------------------
# Plane-curve intersection multiplicity at the origin
# ---------------------------------------------------------------------
def _common_tower(*polys) -> FieldTower:
    return coefficient_tower(*polys) or TRIVIAL


def _to_yx(p: MultiPoly, tower: FieldTower) -> List[list]:
    """2-variable polynomial as list over y-degree of x-coefficient lists."""
    dy = p.degree_in(1)
    out: List[list] = [[] for _ in range(dy + 1)] if dy >= 0 else []
    for (ex, ey), c in p.terms.items():
        row = out[ey]
        while len(row) <= ex:
            row.append(tower.zero())
        row[ex] = row[ex] + tower.element(c)
    return [tp_trim(row) for row in out]


def _from_yx(rows: List[list]) -> MultiPoly:
    terms = {}
    for ey, row in enumerate(rows):
        for ex, c in enumerate(row):
            if not _is_zero(c):
                terms[(ex, ey)] = c
    return MultiPoly(2, terms)


def _content(rows: List[list], tower: FieldTower) -> list:
    g: list = []
    for row in rows:
        if row:
            g = tp_gcd(g, row) if g else tp_gcd(row, row)
    return g or [tower.one()]


def _rows_divide_content(rows: List[list], cont: list) -> List[list]:
    out = []
    for row in rows:
        if not row:
            out.append(row)
            continue
        q, r = tp_divmod(row, cont)
        if not tp_is_zero(r):
            raise InternalInvariantViolation("content division not exact")
        out.append(q)
    return out


def _rows_trim(rows: List[list]) -> List[list]:
    while rows and not rows[-1]:
        rows = rows[:-1]
    return rows


def gcd_xy(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Greatest common divisor in K[x, y] (primitive Euclid in y over K[x]),
    normalized so its graded-lex leading coefficient is 1."""
    if f.is_zero():
        return _gcd_normalize(g)
    if g.is_zero():
        return _gcd_normalize(f)
    tower = _common_tower(f, g)
    A = _rows_trim(_to_yx(f, tower))
    B = _rows_trim(_to_yx(g, tower))
    ca, cb = _content(A, tower), _content(B, tower)
    A = _rows_trim(_rows_divide_content(A, ca))
    B = _rows_trim(_rows_divide_content(B, cb))
    cg = tp_gcd(ca, cb)
    # primitive pseudo-remainder loop in y
    while True:
        if len(B) == 0:
            pp = A
            break
        if len(B) == 1:
            # B is a unit times content already stripped -> gcd of primitives is 1
            pp = None
            break
        if len(A) < len(B):
            A, B = B, A
            continue
        R = _pseudo_remainder(A, B, tower)
        R = _rows_trim(R)
        if R:
            cr = _content(R, tower)
            R = _rows_trim(_rows_divide_content(R, cr))
        A, B = B, R
    acc_rows: List[list]
    if pp is None:
        acc_rows = [cg]
    else:
        acc_rows = [tp_mul(row, cg) if row else row for row in pp]
    return _gcd_normalize(_from_yx(acc_rows))


def _gcd_normalize(p: MultiPoly) -> MultiPoly:
    if p.is_zero():
        return p
    lead = p.sorted_terms()[-1][1]
    inv = lead.inverse() if hasattr(lead, "inverse") else 1 / lead
    return p.scale(inv)


def _pseudo_remainder(A: List[list], B: List[list], tower: FieldTower) -> List[list]:
    """Pseudo-remainder of A by B in y over K[x] (fraction-free)."""
    A = [list(r) for r in A]
    lcB = B[-1]
    while len(A) >= len(B) and _rows_trim(A):
        lcA = A[-1]
        shift = len(A) - len(B)
        newA: List[list] = []
        for k in range(len(A) - 1):
            term = tp_mul(A[k], lcB)
            if 0 <= k - shift < len(B) - 1:
                term = [x - y for x, y in _padzip(term, tp_mul(B[k - shift], lcA), tower)]
            newA.append(tp_trim(term))
        A = _rows_trim(newA)
        if not A:
            break
    return A


def _padzip(a: list, b: list, tower: FieldTower):
    n = max(len(a), len(b))
    za = a + [tower.zero()] * (n - len(a))
    zb = b + [tower.zero()] * (n - len(b))
    return zip(za, zb)


def divide_exact_xy(f: MultiPoly, h: MultiPoly) -> MultiPoly:
    """Exact division in K[x, y]; raises if h does not divide f."""
    if h.is_zero():
        raise ZeroInput("division by the zero polynomial")
    if f.is_zero():
        return f
    tower = _common_tower(f, h)
    F = _rows_trim(_to_yx(f, tower))
    H = _rows_trim(_to_yx(h, tower))
    if len(H) == 1:
        out = []
        for row in F:
            if not row:
                out.append(row)
                continue
            q, r = tp_divmod(row, H[0])
            if not tp_is_zero(r):
                raise InternalInvariantViolation("division not exact")
            out.append(q)
        return _from_yx(out)
    # division in K(x)[y] with exactness checks via rational functions
    rf = _RF(tower)
    Fq = [rf.of_poly(row) for row in F]
    Hq = [rf.of_poly(row) for row in H]
    Q, R = _rf_divmod(Fq, Hq, rf)
    if any(not rf.is_zero(c) for c in R):
        raise InternalInvariantViolation("division not exact (remainder)")
    out_rows = []
    for c in Q:
        num, den = c
        if tp_deg(den) != 0:
            # clear the constant denominator only; nontrivial one means not exact
            raise InternalInvariantViolation("division not exact (denominator)")
        inv = den[0].inverse() if hasattr(den[0], "inverse") else 1 / den[0]
        out_rows.append(tp_scale(num, inv))
    return _from_yx(out_rows)


class _RF:
    """Tiny rational-function helper over K[x]: values are (num, den) pairs."""

    def __init__(self, tower: FieldTower):
        self.tower = tower

    def of_poly(self, p: list):
        return (list(p), [self.tower.one()])

    def is_zero(self, v) -> bool:
        return tp_is_zero(v[0])

    def add(self, a, b):
        from .towers import tp_add

        num = tp_add(tp_mul(a[0], b[1]), tp_mul(b[0], a[1]))
        return self.reduce((num, tp_mul(a[1], b[1])))

    def mul(self, a, b):
        return self.reduce((tp_mul(a[0], b[0]), tp_mul(a[1], b[1])))

    def neg(self, a):
        return ([-c for c in a[0]], a[1])

    def inv(self, a):
        if tp_is_zero(a[0]):
            raise ZeroInput("inverse of zero rational function")
        return self.reduce((a[1], a[0]))

    def reduce(self, a):
        num, den = tp_trim(a[0]), tp_trim(a[1])
        if tp_is_zero(num):
            return ([], [self.tower.one()])
        g = tp_gcd(num, den)
        if tp_deg(g) > 0:
            num, _ = tp_divmod(num, g)
            den, _ = tp_divmod(den, g)
        lead = den[-1]
        inv = lead.inverse() if hasattr(lead, "inverse") else 1 / lead
        return (tp_scale(num, inv), tp_scale(den, inv))


def _rf_divmod(F: list, H: list, rf: _RF):
    """Division of y-polynomials with rational-function coefficients."""
    F = list(F)
    while F and rf.is_zero(F[-1]):
        F.pop()
    H = list(H)
    while H and rf.is_zero(H[-1]):
        H.pop()
    dh = len(H) - 1
    lc_inv = rf.inv(H[-1])
    Q = [rf.of_poly([]) for _ in range(max(0, len(F) - dh))]
    R = F
    while len(R) - 1 >= dh and R:
        c = rf.mul(R[-1], lc_inv)
        k = len(R) - 1 - dh
        Q[k] = rf.add(Q[k], c)
        for j in range(dh + 1):
            R[k + j] = rf.add(R[k + j], rf.neg(rf.mul(c, H[j])))
        while R and rf.is_zero(R[-1]):
            R.pop()
    return Q, R


def intersection_number(f: MultiPoly, g: MultiPoly) -> Union[int, float]:
    """Intersection multiplicity of the plane curves f = 0 and g = 0 at the
    origin (infinity when they share a branch through it)."""
    if f.nvars != 2 or g.nvars != 2:
        raise ZeroInput("intersection numbers are planar (2 variables)")
    if f.is_zero() or g.is_zero():
        return math.inf
    if not _is_zero(f.constant_term()) or not _is_zero(g.constant_term()):
        return 0
    h = gcd_xy(f, g)
    if h.total_degree() > 0 and _is_zero(h.constant_term()):
        return math.inf
    if h.total_degree() > 0:
        f = divide_exact_xy(f, h)
        g = divide_exact_xy(g, h)
    tower = _common_tower(f, g)
    for c in (0, 1, -1, 2, -2, 3, -3, 4, -4, 5, -5, 6, -6, 7, -7):
        fc = _shear(f, c)
        gc = _shear(g, c)
        if not _shear_ok(fc, tower) or not _shear_ok(gc, tower):
            continue
        f0 = _axis_slice(fc, tower)
        g0 = _axis_slice(gc, tower)
        if not f0 or not g0:
            continue  # a curve contains the test axis; shear again
        common = tp_gcd(f0, g0)
        if tp_deg(common) > 0:
            low = min(k for k, cc in enumerate(common) if not _is_zero(cc))
            if low != tp_deg(common):
                continue  # common root off the origin on the test axis
        res = _resultant_y(fc, gc, tower)
        if tp_is_zero(res):
            raise InternalInvariantViolation(
                "vanishing resultant after removing common factors")
        low = min(k for k, cc in enumerate(res) if not _is_zero(cc))
        return low
    raise InternalInvariantViolation("no admissible shear found")


def _shear(p: MultiPoly, c: int) -> MultiPoly:
    if c == 0:
        return p
    x = MultiPoly.variable(0, 2)
    y = MultiPoly.variable(1, 2)
    return p.substitute([x + y.scale(c), y])


def _shear_ok(p: MultiPoly, tower: FieldTower) -> bool:
    """Leading y-coefficient must be constant in x (no degree drop under
    specialization)."""
    dy = p.degree_in(1)
    if dy < 0:
        return False
    lead = {e: c for e, c in p.terms.items() if e[1] == dy}
    return all(e[0] == 0 for e in lead)


def _axis_slice(p: MultiPoly, tower: FieldTower) -> list:
    """p(0, y) as a univariate list."""
    out: list = []
    for (ex, ey), c in p.terms.items():
        if ex:
            continue
        while len(out) <= ey:
            out.append(tower.zero())
        out[ey] = out[ey] + tower.element(c)
    return tp_trim(out)


def _resultant_y(f: MultiPoly, g: MultiPoly, tower: FieldTower) -> list:
    """Res_y(f, g) as a polynomial in x, by evaluation and interpolation."""
    from .towers import _interpolate

    dx_f, dy_f = f.degree_in(0), f.degree_in(1)
    dx_g, dy_g = g.degree_in(0), g.degree_in(1)
    bound = dx_f * dy_g + dx_g * dy_f
    xs, ys = [], []
    j = 0
    while len(xs) <= bound:
        xv = tower.element(j)
        fy = _eval_x(f, xv, tower)
        gy = _eval_x(g, xv, tower)
        if tp_deg(fy) != dy_f or tp_deg(gy) != dy_g:
            j += 1
            continue  # cannot happen with constant leading coeffs, kept for safety
        r = tp_resultant(fy, gy)
        xs.append(xv)
        ys.append(r if isinstance(r, FieldElement) else tower.element(r))
        j += 1
    return _interpolate(xs, ys, tower)


def _eval_x(p: MultiPoly, xv, tower: FieldTower) -> list:
    out: list = []
    powers = {0: tower.one()}
    for (ex, ey), c in p.terms.items():
        if ex not in powers:
            powers[ex] = xv ** ex
        v = tower.element(c) * powers[ex]
        while len(out) <= ey:
            out.append(tower.zero())
        out[ey] = out[ey] + v
    return tp_trim(out)
