"""Return maps around separatrices, their periodicity, and product integrals.

The linear multiplier of the return map around a separatrix of a simple
singular point is the exponential of the eigenvalue ratio; for rational
ratios it is an exact root of unity.  For a germ with one zero eigenvalue
the return map around the strong separatrix is computed as the formal
time-one map of the reduced transversal dynamics, with a transcendental
symbol tau carrying the loop weight; its first deviation from the
identity appears exactly at degree p + 1.

A nonconstant analytic invariant function forces every singular point of
the resolved object to be of rational-ratio type with trivial resonant
part, and forbids dicritical components.  For a germ with homogeneous
components the invariant, when it exists, is a product of powers of the
tangent-cone factors; the residues of the defining form along those
factors decide existence and the exponents.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import (
    DicriticalInput,
    InternalInvariantViolation,
    NonIntegerResidues,
    WrongClass,
    ZeroBaseEigenvalue,
    ZeroInput,
)
from .errors import DegenerateEigenData
from .local import divide_exact_xy, eigen_pair, gcd_xy
from .normalforms import diagonalize_linear_part, resonant_normal_form, _demote
from .poly import (
    MultiPoly,
    OneFormGerm,
    VectorFieldGerm,
    coefficient_tower,
    dualize,
    lift_poly,
    render_poly,
    scalar_to_json,
)
from .resolve import resolve
from .scalars import GaussianRational, TauScalar, scalar_is_zero
from .towers import TRIVIAL, factor_univariate


# ---------------------------------------------------------------------------
# multipliers
# ---------------------------------------------------------------------------

class ExactMultiplier:
    """Root-of-unity multiplier written as exp(2 pi i r) with rational r."""

    __slots__ = ("exponent",)

    def __init__(self, exponent):
        self.exponent = Fraction(exponent)

    @property
    def order(self) -> int:
        """Multiplicative order of the multiplier."""
        return (self.exponent % 1).denominator

    def value(self) -> complex:
        return cmath.exp(2j * math.pi * float(self.exponent))

    def as_gaussian_or_none(self) -> Optional[GaussianRational]:
        reduced = self.exponent % 1
        table = {
            Fraction(0): GaussianRational(1, 0),
            Fraction(1, 2): GaussianRational(-1, 0),
            Fraction(1, 4): GaussianRational(0, 1),
            Fraction(3, 4): GaussianRational(0, -1),
        }
        return table.get(reduced)

    def __mul__(self, other):
        if not isinstance(other, ExactMultiplier):
            return NotImplemented
        return ExactMultiplier(self.exponent + other.exponent)

    def __pow__(self, n: int):
        return ExactMultiplier(self.exponent * n)

    def inverse(self) -> "ExactMultiplier":
        return ExactMultiplier(-self.exponent)

    def __eq__(self, other):
        if isinstance(other, ExactMultiplier):
            return self.exponent % 1 == other.exponent % 1
        g = self.as_gaussian_or_none()
        if g is not None:
            return g == other
        return NotImplemented

    def __hash__(self):
        return hash(self.exponent % 1)

    def __repr__(self):
        return f"ExactMultiplier(exp(2*pi*i*{self.exponent}))"

    def to_json(self) -> dict:
        out = {"kind": "root-of-unity", "exponent": str(self.exponent),
               "order": self.order}
        g = self.as_gaussian_or_none()
        if g is not None:
            out["value"] = scalar_to_json(g)
        return out


class ComplexMultiplier:
    """Multiplier exp(2 pi i r) for a nonrational exponent r."""

    __slots__ = ("exponent",)

    def __init__(self, exponent):
        self.exponent = exponent

    def modulus(self) -> float:
        return math.exp(-2.0 * math.pi * complex(self.exponent).imag)

    def value(self) -> complex:
        return cmath.exp(2j * math.pi * complex(self.exponent))

    def __repr__(self):
        return f"ComplexMultiplier(exp(2*pi*i*({self.exponent})))"

    def to_json(self) -> dict:
        return {"kind": "transcendental-exponent",
                "exponent": scalar_to_json(self.exponent),
                "modulus": self.modulus()}


def linear_holonomy(obj, base_index: int = 0):
    """Multiplier of the return map around the separatrix of one eigenvalue.

    ``obj`` is a germ or an eigenvalue pair; the exponent is the ratio of
    the other eigenvalue to the chosen one.
    """
    if isinstance(obj, VectorFieldGerm):
        _, lam1, lam2 = eigen_pair(obj)
        lams = (_demote(lam1), _demote(lam2))
    else:
        lams = tuple(obj)
    if len(lams) != 2:
        raise WrongClass("return-map multiplier needs exactly two eigenvalues")
    base = lams[base_index]
    other = lams[1 - base_index]
    if scalar_is_zero(base):
        raise ZeroBaseEigenvalue(
            "separatrix eigenvalue vanishes; the return map is not linearizable")
    ratio = _ratio(other, base)
    frac = _as_real_fraction(ratio)
    if frac is not None:
        return ExactMultiplier(frac)
    return ComplexMultiplier(ratio)


def _ratio(a, b):
    inv = getattr(b, "inverse", None)
    if inv is not None:
        return a * inv()
    return Fraction(a) / Fraction(b) if isinstance(a, (int, Fraction)) else a * (1 / b)


def _as_real_fraction(v) -> Optional[Fraction]:
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    if isinstance(v, GaussianRational):
        return v.re if v.im == 0 else None
    as_g = getattr(v, "as_gaussian_or_none", None)
    if as_g is not None:
        g = as_g()
        if g is not None and g.im == 0:
            return g.re
    return None


# ---------------------------------------------------------------------------
# formal return-map germs
# ---------------------------------------------------------------------------

class GermSeries:
    """Truncated formal map z -> sum a_k z^k, a_1 the linear coefficient."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Dict[int, object], order: int):
        self.coeffs = {k: v for k, v in coeffs.items()
                       if k <= order and not scalar_is_zero(v)}
        self.order = order

    @classmethod
    def identity(cls, order: int) -> "GermSeries":
        return cls({1: TauScalar.constant(GaussianRational(1))}, order)

    def coefficient(self, k: int):
        return self.coeffs.get(k, TauScalar({}))

    def linear_coefficient(self):
        return self.coefficient(1)

    def compose(self, other: "GermSeries") -> "GermSeries":
        order = min(self.order, other.order)
        inner = MultiPoly(1, {(k,): v for k, v in other.coeffs.items()})
        powers = {1: inner.truncate(order)}
        out = MultiPoly.zero(1)
        for k in sorted(self.coeffs):
            if k not in powers:
                prev = max(e for e in powers if e < k)
                acc = powers[prev]
                for _ in range(k - prev):
                    acc = (acc * inner).truncate(order)
                powers[k] = acc
            out = out + powers[k].scale(self.coeffs[k])
        return GermSeries({e[0]: c for e, c in out.terms.items()}, order)

    def first_obstruction(self) -> Optional[Tuple[int, object]]:
        """Smallest k >= 2 with a nonzero coefficient, if any."""
        past_linear = sorted(k for k in self.coeffs if k >= 2)
        if not past_linear:
            return None
        k = past_linear[0]
        return k, self.coeffs[k]

    def is_identity(self) -> bool:
        one = TauScalar.constant(GaussianRational(1))
        return self.coeffs == {1: one} or (not self.coeffs)

    def to_json(self) -> dict:
        return {"order": self.order,
                "coefficients": {str(k): str(self.coeffs[k])
                                 for k in sorted(self.coeffs)}}

    def __repr__(self):
        parts = [f"({self.coeffs[k]})*z^{k}" for k in sorted(self.coeffs)]
        return "GermSeries(" + " + ".join(parts) + f" + O(z^{self.order + 1}))"


def _trunc_z(poly: MultiPoly, order: int) -> MultiPoly:
    return MultiPoly(2, {e: c for e, c in poly.terms.items() if e[1] <= order})


def _integrate_t(poly: MultiPoly) -> MultiPoly:
    out = {}
    for (m, k), c in poly.terms.items():
        out[(m + 1, k)] = TauScalar.coerce(c).divide_by_int(m + 1)
    return MultiPoly(2, out)


def saddle_node_holonomy(p: int, modulus, order: int = 6) -> GermSeries:
    """Return map around the strong separatrix of the reduced model.

    Integrates the transversal dynamics dz/dt = tau z^{p+1} / (1 + c z^p)
    from the identity over one loop of formal weight tau; the result is a
    germ tangent to the identity whose first deviation is tau at z^{p+1}.
    """
    if p < 1:
        raise WrongClass("contact exponent must be at least 1")
    if order < p + 1:
        raise ZeroInput("truncation order must reach the first deviation")
    lam = modulus if not isinstance(modulus, int) else Fraction(modulus)
    # G(w) = tau w^{p+1} (1 + lam w^p)^{-1}, expanded through z-degree ``order``
    G: Dict[int, TauScalar] = {}
    j = 0
    while p + 1 + j * p <= order:
        coeff = (-1) ** j
        c = coeff
        for _ in range(j):
            c = c * lam if not isinstance(c, int) else lam * c
        # c = (-lam)^j with exact scalar arithmetic
        G[p + 1 + j * p] = TauScalar.tau(1, GaussianRational.coerce(c)
                                         if isinstance(c, (int, Fraction))
                                         else c)
        j += 1

    one = TauScalar.constant(GaussianRational(1))
    y = MultiPoly(2, {(0, 1): one})  # variables (t, z)
    for k in range(2, order + 1):
        acc = y
        e = 1
        rhs = MultiPoly.zero(2)
        for m in sorted(G):
            while e < m:
                acc = _trunc_z(acc * y, order)
                e += 1
            rhs = rhs + acc.scale(G[m])
        rhs_k = MultiPoly(2, {ex: c for ex, c in rhs.terms.items() if ex[1] == k})
        a_k = _integrate_t(rhs_k)
        y = y + a_k
    h: Dict[int, TauScalar] = {}
    for (m, k), c in y.terms.items():
        h[k] = h.get(k, TauScalar({})) + TauScalar.coerce(c)
    return GermSeries(h, order)


class GermOrderResult:
    __slots__ = ("kind", "order", "obstruction")

    def __init__(self, kind: str, order: Optional[int] = None,
                 obstruction=None):
        self.kind = kind  # finite | infinite | undecided
        self.order = order
        self.obstruction = obstruction

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.order is not None:
            out["order"] = self.order
        if self.obstruction is not None:
            k, c = self.obstruction
            out["obstruction"] = {"degree": k, "coefficient": str(c)}
        return out

    def __repr__(self):
        return f"GermOrderResult({self.kind}, order={self.order})"


def germ_order(obj, cap: int = 24) -> GermOrderResult:
    """Periodicity of a return map: finite order, infinite, or undecidable."""
    if isinstance(obj, ExactMultiplier):
        return GermOrderResult("finite", obj.order)
    if isinstance(obj, ComplexMultiplier):
        frac = _as_real_fraction(obj.exponent)
        if frac is not None:
            return GermOrderResult("finite", (frac % 1).denominator)
        if abs(complex(obj.exponent).imag) > 0:
            return GermOrderResult("infinite")
        # provably real and irrational exponent: never periodic
        return GermOrderResult("infinite")
    if isinstance(obj, GermSeries):
        lin = obj.linear_coefficient()
        one = TauScalar.constant(GaussianRational(1))
        if lin == one:
            obstruction = obj.first_obstruction()
            if obstruction is not None:
                return GermOrderResult("infinite", obstruction=obstruction)
            return GermOrderResult("undecided")
        return GermOrderResult("undecided")
    raise WrongClass(f"cannot measure periodicity of {type(obj).__name__}")


# ---------------------------------------------------------------------------
# necessary conditions for an analytic invariant function
# ---------------------------------------------------------------------------

class IntegralVerdict:
    """Aggregated leafwise obstructions to a nonconstant analytic invariant."""

    __slots__ = ("verdict", "reasons", "leaves", "tree")

    def __init__(self, verdict: str, reasons: List[str], leaves: List[dict], tree):
        self.verdict = verdict
        self.reasons = reasons
        self.leaves = leaves
        self.tree = tree

    def passes(self) -> bool:
        return self.verdict == "PassesNecessaryConditions"

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "reasons": self.reasons,
                "leaves": self.leaves}

    def __repr__(self):
        return f"IntegralVerdict({self.verdict})"


def _leaf_formally_linearizable(node, order: int) -> bool:
    field = dualize(node.form)
    try:
        diag, _, _, _ = diagonalize_linear_part(field)
    except DegenerateEigenData:
        return False
    result = resonant_normal_form(diag, order=order)
    return not result.kept


def mattei_moussu_criterion(obj, order: int = 8, max_blowups: int = 64) -> IntegralVerdict:
    """Necessary conditions for a nonconstant analytic invariant function.

    Resolves the germ and inspects every terminal singular point: points
    with one zero eigenvalue, nonreal or positive real ratios, dicritical
    components, and resonant ratios with nontrivial resonant part all
    obstruct; irrational negative ratios leave the question open.

    A common polynomial factor of the two components is divided out first:
    it multiplies the form without changing the foliation, so the question
    of an invariant function is decided on the reduced representative.
    """
    if isinstance(obj, VectorFieldGerm):
        obj = dualize(obj)
    if isinstance(obj, OneFormGerm):
        common = gcd_xy(obj.a, obj.b)
        if common.total_degree() > 0:
            obj = OneFormGerm(divide_exact_xy(obj.a, common),
                              divide_exact_xy(obj.b, common))
    tree = resolve(obj, max_blowups=max_blowups)
    reasons: List[str] = []
    undecided = False
    leaves: List[dict] = []

    for node in tree.nodes:
        if node.expanded and node.dicritical:
            reasons.append(
                f"node {node.id}: dicritical component crosses infinitely "
                "many leaves")

    for leaf in tree.leaves():
        tag = leaf.classification.tag
        entry = {"node": leaf.id, "tag": tag}
        if tag == "Regular" or (leaf.expanded and leaf.dicritical):
            entry["status"] = "ok" if tag == "Regular" else "fails"
            leaves.append(entry)
            continue
        if tag == "SaddleNode":
            entry["status"] = "fails"
            entry["reason"] = "zero eigenvalue at a terminal point"
            reasons.append(f"node {leaf.id}: {entry['reason']}")
        elif tag == "Hyperbolic":
            entry["status"] = "fails"
            entry["reason"] = "nonreal eigenvalue ratio at a terminal point"
            reasons.append(f"node {leaf.id}: {entry['reason']}")
        elif tag == "SimplePoincareNonresonant":
            entry["status"] = "fails"
            entry["reason"] = "positive real ratio forces constancy nearby"
            reasons.append(f"node {leaf.id}: {entry['reason']}")
        elif tag == "SiegelRational":
            if _leaf_formally_linearizable(leaf, order):
                entry["status"] = "ok"
                entry["reason"] = f"rational ratio, no resonant part through {order}"
            else:
                entry["status"] = "fails"
                entry["reason"] = "resonant part obstructs a periodic return map"
                reasons.append(f"node {leaf.id}: {entry['reason']}")
        elif tag == "SiegelIrrational":
            entry["status"] = "undecided"
            entry["reason"] = "irrational negative ratio; periodicity unknown"
            undecided = True
        else:
            entry["status"] = "fails"
            entry["reason"] = f"unresolved terminal point of type {tag}"
            reasons.append(f"node {leaf.id}: {entry['reason']}")
        leaves.append(entry)

    if reasons:
        verdict = "FailsNecessaryConditions"
    elif undecided:
        verdict = "Undecided"
    else:
        verdict = "PassesNecessaryConditions"
    return IntegralVerdict(verdict, reasons, leaves, tree)


# ---------------------------------------------------------------------------
# product integrals for homogeneous germs
# ---------------------------------------------------------------------------

class FirstIntegralResult:
    __slots__ = ("integral", "factors", "residues", "form")

    def __init__(self, integral: MultiPoly,
                 factors: List[Tuple[MultiPoly, int]],
                 residues: List[Fraction], form: OneFormGerm):
        self.integral = integral
        self.factors = factors
        self.residues = residues
        self.form = form

    def to_json(self) -> dict:
        return {
            "integral": render_poly(self.integral),
            "factors": [{"polynomial": render_poly(q), "exponent": n}
                        for q, n in self.factors],
            "residues": [str(r) for r in self.residues],
        }


def _homogeneous_degree(p: MultiPoly) -> int:
    degs = {sum(e) for e in p.terms}
    if len(degs) > 1:
        raise WrongClass("coefficients must be homogeneous")
    return degs.pop() if degs else -1


def _factor_cone(phi: MultiPoly, tower) -> List[Tuple[MultiPoly, int]]:
    """Irreducible homogeneous factors of a binary form with multiplicities."""
    m0 = phi.order_in(0)
    rest = phi.divide_by_var_power(0, m0) if m0 else phi
    # rest(1, t): setting x = 1 leaves a univariate polynomial in t = y/x
    t_poly_coeffs = []
    deg_t = rest.degree_in(1)
    for k in range(deg_t + 1):
        c = None
        for exps, coeff in rest.terms.items():
            if exps[1] == k:
                c = coeff if c is None else c + coeff
        t_poly_coeffs.append(tower.element(c if c is not None else 0))
    _, factors = factor_univariate(t_poly_coeffs, tower)
    out: List[Tuple[MultiPoly, int]] = []
    if m0:
        out.append((MultiPoly.variable(0, 2), m0))
    for coeffs, mult in factors:
        d = len(coeffs) - 1
        terms = {}
        for k, c in enumerate(coeffs):
            terms[(d - k, k)] = _demote(c)
        out.append((MultiPoly(2, terms), mult))
    return out


def _solve_exact(rows: List[List[object]], rhs: List[object]) -> Optional[List[object]]:
    """Gaussian elimination over exact scalars; None when inconsistent."""
    m = len(rows)
    n = len(rows[0]) if rows else 0
    aug = [list(r) + [v] for r, v in zip(rows, rhs)]
    pivots = []
    row = 0
    for col in range(n):
        sel = None
        for r in range(row, m):
            if not scalar_is_zero(aug[r][col]):
                sel = r
                break
        if sel is None:
            continue
        aug[row], aug[sel] = aug[sel], aug[row]
        inv = getattr(aug[row][col], "inverse", None)
        pivot_inv = inv() if inv else Fraction(1) / Fraction(aug[row][col])
        aug[row] = [v * pivot_inv for v in aug[row]]
        for r in range(m):
            if r != row and not scalar_is_zero(aug[r][col]):
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    for r in range(row, m):
        if not scalar_is_zero(aug[r][n]):
            return None
    solution = [Fraction(0)] * n
    for r, col in enumerate(pivots):
        solution[col] = aug[r][n]
    # columns without pivots stay zero; for our systems factors always
    # contribute, so a zero residue is caught by the caller
    return solution


def construct_first_integral_homogeneous(obj) -> FirstIntegralResult:
    """Power-product invariant of a germ with homogeneous components.

    Writes the defining form as a combination of logarithmic differentials
    of the cone factors, demands positive rational residues, and returns
    the corresponding coprime power product, verified exactly.
    """
    form = dualize(obj) if isinstance(obj, VectorFieldGerm) else obj
    if not isinstance(form, OneFormGerm):
        raise WrongClass("expected a vector field or a differential form")
    if form.is_zero():
        raise ZeroInput("zero form has every function invariant")
    da = _homogeneous_degree(form.a)
    db = _homogeneous_degree(form.b)
    if da >= 0 and db >= 0 and da != db:
        raise WrongClass("coefficients must share one homogeneity degree")

    x = MultiPoly.variable(0, 2)
    y = MultiPoly.variable(1, 2)
    phi = x * form.a + y * form.b
    if phi.is_zero():
        raise DicriticalInput(
            "radial contraction vanishes; every line is invariant")

    tower = coefficient_tower(form.a, form.b, phi) or TRIVIAL
    factors = _factor_cone(lift_poly(phi, tower) if tower is not TRIVIAL else phi,
                           tower)

    columns = []
    for q, _ in factors:
        cof = divide_exact_xy(phi, q)
        columns.append((cof * q.derivative(0), cof * q.derivative(1)))

    degree = _homogeneous_degree(form.a if not form.a.is_zero() else form.b)
    exps = [(degree - k, k) for k in range(degree + 1)]
    rows: List[List[object]] = []
    rhs: List[object] = []
    for comp_index, target in ((0, form.a), (1, form.b)):
        for e in exps:
            rows.append([col[comp_index].coefficient(e) for col in columns])
            rhs.append(target.coefficient(e))
    solution = _solve_exact(rows, rhs)
    if solution is None:
        raise NonIntegerResidues(
            "form is not a combination of logarithmic differentials of its "
            "cone factors")

    residues: List[Fraction] = []
    for v in solution:
        frac = _as_real_fraction(v)
        if frac is None or frac <= 0:
            raise NonIntegerResidues(
                "residues must be positive rationals",
                residues=[scalar_to_json(s) for s in solution])
        residues.append(frac)

    lcm = 1
    for r in residues:
        lcm = lcm * r.denominator // math.gcd(lcm, r.denominator)
    ints = [int(r * lcm) for r in residues]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    ints = [v // g for v in ints]

    integral = MultiPoly.constant(GaussianRational(1), 2)
    for (q, _), n in zip(factors, ints):
        integral = integral * q ** n
    witness = form.wedge_with_df(integral)
    if not witness.is_zero():
        raise InternalInvariantViolation(
            "constructed product fails the invariance identity")
    return FirstIntegralResult(
        integral, [(q, n) for (q, _), n in zip(factors, ints)], residues, form)


def verify_first_integral(form: OneFormGerm, candidate: MultiPoly) -> bool:
    """Exact check that the candidate is constant along the form's kernel."""
    return form.wedge_with_df(candidate).is_zero()


def projective_holonomy_generators(result: FirstIntegralResult) -> List[ExactMultiplier]:
    """Multipliers of the loops around the tangent directions, one per root.

    A factor of degree d contributes d conjugate loops with equal
    multipliers.  The exponents sum to -1, so the product of all
    generators is the identity, as the composite loop contracts.
    """
    total = Fraction(0)
    for (q, _), nu in zip(result.factors, result.residues):
        total += nu * _homogeneous_degree(q)
    gens: List[ExactMultiplier] = []
    for (q, _), nu in zip(result.factors, result.residues):
        d = _homogeneous_degree(q)
        for _ in range(d):
            gens.append(ExactMultiplier(-nu / total))
    s = sum(g.exponent for g in gens)
    if s.denominator != 1:
        raise InternalInvariantViolation(
            "loop exponents fail to close up to an integer")
    return gens
