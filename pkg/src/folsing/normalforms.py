"""Polynomial conjugacy engine for singular vector field germs.

Given a germ with diagonal linear part, the engine builds a polynomial
change of coordinates H = id + h degree by degree.  At each degree the
coefficient of H (``solve``) or of the reduced field (``keep``) absorbs
the corresponding coefficient of the conjugacy defect; a *pattern*
callback decides which, per component and monomial.  The divisor of the
solve step is delta = <Q, lambda> - lambda_i, so solving a monomial with
vanishing delta and a nonzero right-hand side is an error.

On top of the engine sit the named reductions: full linearization in the
absence of small divisors and resonances, the minimal resonant model,
separatrix straightening for saddles, the zero-eigenvalue reduction that
empties the center-free monomials, an invariant-plane reduction in three
variables, and the full preparation of a degenerate unipotent-free germ
with one zero eigenvalue (center manifold, shift, and the residue pair
``(p, lambda)``).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .errors import (
    DegenerateEigenData,
    InternalInvariantViolation,
    LinearPartNotPrepared,
    NotPoincareDomain,
    NotSingular,
    ResonanceObstruction,
    TruncationTooSmall,
    WrongClass,
    ZeroDivisorDelta,
)
from .local import classify_singularity, detect_resonances, domain_classification, eigen_pair
from .poly import MultiPoly, TruncatedSeries, VectorFieldGerm, scalar_to_json
from .scalars import scalar_is_zero

Exponent = Tuple[int, ...]
Decide = Callable[[int, Exponent, object], bool]


def _inv(c):
    inv = getattr(c, "inverse", None)
    if inv is not None:
        return inv()
    return Fraction(1) / Fraction(c)


def _demote(c):
    """Shrink a tower element that happens to be rational back to a plain scalar."""
    as_g = getattr(c, "as_gaussian_or_none", None)
    if as_g is not None:
        g = as_g()
        if g is not None:
            c = g
    if hasattr(c, "re") and scalar_is_zero(getattr(c, "im")):
        return c.re
    return c


def _div(a, b):
    return a * _inv(b)


def _monomials(nvars: int, degree: int):
    """All exponent tuples of the given total degree, lexicographic from x."""
    if nvars == 1:
        yield (degree,)
        return
    for k in range(degree, -1, -1):
        for rest in _monomials(nvars - 1, degree - k):
            yield (k,) + rest


def _compose_trunc(poly: MultiPoly, maps: Sequence[MultiPoly], order: int) -> MultiPoly:
    """poly(maps), discarding all terms of total degree above ``order``.

    Assumes every map vanishes at the origin, so a source monomial of
    degree above ``order`` cannot contribute and is skipped outright.
    """
    n = maps[0].nvars
    caches: List[Dict[int, MultiPoly]] = [dict() for _ in maps]

    def power(j: int, e: int) -> MultiPoly:
        cache = caches[j]
        got = cache.get(e)
        if got is not None:
            return got
        if e == 1:
            p = maps[j].truncate(order)
        else:
            p = (power(j, e - 1) * maps[j]).truncate(order)
        cache[e] = p
        return p

    out = MultiPoly.zero(n)
    for exps, coeff in poly.terms.items():
        if sum(exps) > order:
            continue
        term = MultiPoly.constant(coeff, n)
        for j, e in enumerate(exps):
            if e:
                term = (term * power(j, e)).truncate(order)
        out = out + term
    return out.truncate(order)


def _diagonal_lambdas(field: VectorFieldGerm) -> Tuple:
    if not field.is_singular_at_origin():
        raise NotSingular("conjugacy engine needs a singular germ at the origin")
    mat = field.linear_part_matrix()
    n = field.nvars
    for i in range(n):
        for j in range(n):
            if i != j and not scalar_is_zero(mat[i][j]):
                raise LinearPartNotPrepared(
                    "linear part must be diagonal",
                    row=i + 1, column=j + 1)
    return tuple(mat[i][i] for i in range(n))


class ConjugacyResult:
    """Outcome of a degree-by-degree conjugacy computation."""

    __slots__ = ("pattern", "order", "lambdas", "transform", "normal_form", "kept")

    def __init__(self, pattern: str, order: int, lambdas: Tuple,
                 transform: List[MultiPoly], normal_form: VectorFieldGerm,
                 kept: Dict[Tuple[int, Exponent], object]):
        self.pattern = pattern
        self.order = order
        self.lambdas = lambdas
        self.transform = transform
        self.normal_form = normal_form
        self.kept = kept

    def is_linearized(self) -> bool:
        return not self.kept

    def to_json(self) -> dict:
        return {
            "pattern": self.pattern,
            "order": self.order,
            "eigenvalues": [scalar_to_json(l) for l in self.lambdas],
            "transform": [str(p) for p in self.transform],
            "normal_form": [str(p) for p in self.normal_form.components],
            "kept": [
                {"component": i + 1, "exponents": list(q),
                 "coefficient": scalar_to_json(c)}
                for (i, q), c in sorted(self.kept.items())
            ],
        }


def solve_conjugacy(field: VectorFieldGerm, decide: Decide, order: int,
                    pattern: str = "custom") -> ConjugacyResult:
    """Reduce ``field`` through the given truncation order.

    ``decide(i, Q, delta)`` returns True to push the (i, Q) coefficient
    into the coordinate change and False to keep it in the reduced field.
    """
    lam = _diagonal_lambdas(field)
    n = field.nvars
    linear = field.homogeneous_component(1)
    nonlinear = [field.components[i] - linear.components[i] for i in range(n)]
    variables = [MultiPoly.variable(j, n) for j in range(n)]
    h = [MultiPoly.zero(n) for _ in range(n)]
    g = [MultiPoly.zero(n) for _ in range(n)]
    kept: Dict[Tuple[int, Exponent], object] = {}

    for d in range(2, order + 1):
        maps = [variables[i] + h[i] for i in range(n)]
        for i in range(n):
            defect = _compose_trunc(nonlinear[i], maps, d)
            for j in range(n):
                defect = defect - (h[i].derivative(j) * g[j]).truncate(d)
            slice_d = defect.homogeneous_component(d)
            for exps in _monomials(n, d):
                rhs = slice_d.coefficient(exps)
                rhs_zero = scalar_is_zero(rhs)
                delta = sum((q * lam[j] for j, q in enumerate(exps) if q),
                            start=0 * lam[i]) - lam[i]
                if decide(i, exps, delta):
                    if scalar_is_zero(delta):
                        if rhs_zero:
                            continue
                        raise ZeroDivisorDelta(
                            "resonant coefficient cannot be removed",
                            component=i + 1, exponents=list(exps))
                    if not rhs_zero:
                        h[i] = h[i] + MultiPoly.monomial(_div(rhs, delta), exps)
                elif not rhs_zero:
                    g[i] = g[i] + MultiPoly.monomial(rhs, exps)
                    kept[(i, exps)] = rhs

    transform = [variables[i] + h[i] for i in range(n)]
    normal = VectorFieldGerm([linear.components[i] + g[i] for i in range(n)])
    return ConjugacyResult(pattern, order, lam, transform, normal, kept)


def conjugacy_residual(field: VectorFieldGerm, result: ConjugacyResult) -> List[MultiPoly]:
    """DH * X_reduced - X(H), truncated at the working order (all zero iff valid)."""
    n = field.nvars
    order = result.order
    out = []
    for i in range(n):
        lhs = MultiPoly.zero(n)
        for j in range(n):
            lhs = lhs + (result.transform[i].derivative(j)
                         * result.normal_form.components[j]).truncate(order)
        rhs = _compose_trunc(field.components[i], result.transform, order)
        out.append((lhs - rhs).truncate(order))
    return out


# ---------------------------------------------------------------------------
# named reduction patterns
# ---------------------------------------------------------------------------

def poincare_linearize(field: VectorFieldGerm, order: int = 8) -> ConjugacyResult:
    """Remove every nonlinear term; valid without small divisors or resonances."""
    lam = _diagonal_lambdas(field)
    domain = domain_classification(lam)
    if domain.domain != "poincare":
        raise NotPoincareDomain(
            "spectrum admits small divisors; full linearization not certified",
            domain=domain.domain)
    resonances = detect_resonances(lam, order)
    if resonances:
        raise ResonanceObstruction(
            "resonant monomials obstruct linearization",
            resonances=[{"component": i, "exponents": list(q)}
                        for i, q in resonances])
    return solve_conjugacy(field, lambda i, q, delta: True, order,
                           pattern="linearize")


def resonant_normal_form(field: VectorFieldGerm, order: int = 8) -> ConjugacyResult:
    """Remove exactly the nonresonant terms; keeps every delta = 0 monomial."""
    return solve_conjugacy(
        field, lambda i, q, delta: not scalar_is_zero(delta), order,
        pattern="resonant")


def siegel_straighten(field: VectorFieldGerm, order: int = 8) -> ConjugacyResult:
    """Straighten both separatrices of a two-variable germ.

    Monomials supported on a single axis move into the coordinate change,
    so both axes become invariant for the reduced field.
    """
    if field.nvars != 2:
        raise WrongClass("separatrix straightening handles two variables")
    return solve_conjugacy(
        field, lambda i, q, delta: q[0] == 0 or q[1] == 0, order,
        pattern="straighten")


def dulac_reduce(field: VectorFieldGerm, order: int = 8) -> ConjugacyResult:
    """For eigenvalues (mu, 0): remove every monomial free of the center variable.

    The solved divisors are (q1 - 1) mu and q1 mu, never zero on the
    solved set, so the reduction always succeeds.
    """
    lam = _diagonal_lambdas(field)
    if field.nvars != 2 or not scalar_is_zero(lam[1]) or scalar_is_zero(lam[0]):
        raise WrongClass(
            "reduction expects eigenvalues (mu, 0) with mu nonzero")
    return solve_conjugacy(
        field, lambda i, q, delta: q[1] == 0, order, pattern="center-clear")


def invariant_plane_reduce(field: VectorFieldGerm, order: int = 8) -> ConjugacyResult:
    """Three variables: make the plane y3 = 0 invariant with linear dynamics on it.

    The third component keeps only monomials divisible by y3; the first two
    keep only mixed monomials that carry y3 together with another variable.
    """
    if field.nvars != 3:
        raise WrongClass("invariant-plane reduction handles three variables")

    def decide(i: int, q: Exponent, delta) -> bool:
        if i == 2:
            return q[2] == 0
        return q[2] == 0 or (q[0] == 0 and q[1] == 0)

    return solve_conjugacy(field, decide, order, pattern="invariant-plane")


# ---------------------------------------------------------------------------
# linear preparation
# ---------------------------------------------------------------------------

def _eigenvector(mat, lam):
    """Nonzero kernel vector of (mat - lam I) for a 2x2 matrix."""
    a, b = mat[0][0], mat[0][1]
    c, d = mat[1][0], mat[1][1]
    cand = (b, lam - a)
    if not (scalar_is_zero(cand[0]) and scalar_is_zero(cand[1])):
        return cand
    cand = (lam - d, c)
    if not (scalar_is_zero(cand[0]) and scalar_is_zero(cand[1])):
        return cand
    return None


def diagonalize_linear_part(field: VectorFieldGerm, tower=None):
    """Diagonalize a two-variable germ via its eigenbasis.

    Returns ``(new_field, matrix, lambdas, tower)`` where ``matrix`` is the
    column eigenbasis P and ``new_field`` the germ in the new coordinates
    z with y = P z.  Raises when the linear part is defective.
    """
    if field.nvars != 2:
        raise WrongClass("eigenbasis preparation handles two variables")
    tower, lam1, lam2 = eigen_pair(field, tower=tower)
    lam1, lam2 = _demote(lam1), _demote(lam2)
    mat = field.linear_part_matrix()
    off_diagonal_zero = all(
        scalar_is_zero(mat[i][j]) for i in range(2) for j in range(2) if i != j)
    if off_diagonal_zero:
        lam_a, lam_b = mat[0][0], mat[1][1]
        return field, [[1, 0], [0, 1]], (lam_a, lam_b), tower
    if not scalar_is_zero(lam1 - lam2):
        v1 = _eigenvector(mat, lam1)
        v2 = _eigenvector(mat, lam2)
    else:
        raise DegenerateEigenData(
            "repeated eigenvalue with nondiagonal linear part is defective")
    if v1 is None or v2 is None:
        raise DegenerateEigenData("eigenvector construction failed")
    p00, p10 = v1
    p01, p11 = v2
    det = p00 * p11 - p01 * p10
    if scalar_is_zero(det):
        raise DegenerateEigenData("eigenbasis is singular")
    inv_det = _inv(det)
    q00, q01 = p11 * inv_det, (-1) * p01 * inv_det
    q10, q11 = (-1) * p10 * inv_det, p00 * inv_det
    n = 2
    z1 = MultiPoly.variable(0, n)
    z2 = MultiPoly.variable(1, n)
    images = [z1.scale(p00) + z2.scale(p01), z1.scale(p10) + z2.scale(p11)]
    pulled = [comp.substitute(images) for comp in field.components]
    new_components = [
        pulled[0].scale(q00) + pulled[1].scale(q01),
        pulled[0].scale(q10) + pulled[1].scale(q11),
    ]
    return (VectorFieldGerm(new_components), [[p00, p01], [p10, p11]],
            (lam1, lam2), tower)


# ---------------------------------------------------------------------------
# one zero eigenvalue: full preparation
# ---------------------------------------------------------------------------

class SaddleNodeData:
    """Formal invariants of a germ with eigenvalues (1, 0).

    ``p`` is one less than the contact order of the center dynamics,
    ``modulus`` the residue of the transverse multiplier along the center
    manifold, and ``center`` the coefficients of the center manifold graph
    y1 = c(y2) in the reduced coordinates.
    """

    __slots__ = ("p", "modulus", "center", "prepared", "order")

    def __init__(self, p: int, modulus, center: Dict[int, object],
                 prepared: VectorFieldGerm, order: int):
        self.p = p
        self.modulus = modulus
        self.center = center
        self.prepared = prepared
        self.order = order

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "lambda": scalar_to_json(self.modulus),
            "a": {str(k): scalar_to_json(v) for k, v in sorted(self.center.items())},
        }


def center_manifold_series(field: VectorFieldGerm, order: int) -> MultiPoly:
    """Graph y1 = c(y2) of the formal invariant curve tangent to the kernel.

    Expects eigenvalues (1, 0); solves A(c, y2) = c'(y2) B(c, y2) degree by
    degree, which is always possible because the strong multiplier is 1.
    """
    lam = _diagonal_lambdas(field)
    if not scalar_is_zero(lam[1]) or scalar_is_zero(lam[0]):
        raise WrongClass("center manifold expects eigenvalues (mu, 0)")
    comp_a, comp_b = field.components
    linear = field.homogeneous_component(1)
    a_nl = comp_a - linear.components[0]
    n = 2
    y2 = MultiPoly.variable(1, n)
    c = MultiPoly.zero(n)
    mu_inv = _inv(lam[0])
    for k in range(2, order + 1):
        maps = [c, y2]
        rhs = (c.derivative(1) * _compose_trunc(comp_b, maps, k)).truncate(k) \
            - _compose_trunc(a_nl, maps, k)
        coeff = rhs.homogeneous_component(k).coefficient((0, k))
        if not scalar_is_zero(coeff):
            c = c + MultiPoly.monomial(coeff * mu_inv, (0, k))
    return c


def saddle_node_prepare(field: VectorFieldGerm, order: int = 12) -> SaddleNodeData:
    """Reduce a germ with exactly one zero eigenvalue to residue data.

    Pipeline: eigenbasis, time normalization of the strong multiplier to 1,
    removal of center-free monomials, center-manifold straightening, then
    the contact order ``p + 1`` and the residue of the transverse
    multiplier.  Raises ``TruncationTooSmall`` when the working order
    cannot certify the residue (it needs order >= 2p + 1).
    """
    info = classify_singularity(field)
    if info.tag != "SaddleNode":
        raise WrongClass(
            "preparation expects one zero and one nonzero eigenvalue",
            found=info.tag)
    diag, matrix, lam, tower = diagonalize_linear_part(field)
    if scalar_is_zero(lam[0]):
        # put the nonzero multiplier first
        diag = VectorFieldGerm([
            diag.components[1].substitute([MultiPoly.variable(1, 2),
                                           MultiPoly.variable(0, 2)]),
            diag.components[0].substitute([MultiPoly.variable(1, 2),
                                           MultiPoly.variable(0, 2)]),
        ])
        lam = (lam[1], lam[0])
    diag = diag.scale(_inv(lam[0]))

    reduced = dulac_reduce(diag, order)
    work = reduced.normal_form
    c = center_manifold_series(work, order)

    # shift: new y1 is the old y1 - c(y2)
    y1 = MultiPoly.variable(0, 2)
    y2 = MultiPoly.variable(1, 2)
    lift = [y1 + c, y2]
    comp_a, comp_b = work.components
    shifted_a = _compose_trunc(comp_a - (c.derivative(1) * comp_b).truncate(order),
                               lift, order)
    shifted_b = _compose_trunc(comp_b, lift, order)

    center_slice_a = shifted_a.substitute([MultiPoly.zero(2), y2]).truncate(order)
    if not center_slice_a.is_zero():
        raise InternalInvariantViolation(
            "center manifold fails to straighten the first component")
    transverse = shifted_a.divide_by_var_power(0, 1)

    b_slice = shifted_b.substitute([MultiPoly.zero(2), y2]).truncate(order)
    if b_slice.is_zero():
        raise TruncationTooSmall(
            "center dynamics vanish through the working order; "
            "the singular locus may be a curve", order=order)
    p_plus_1 = b_slice.order_at_origin()
    p = p_plus_1 - 1
    if order < 2 * p + 1:
        raise TruncationTooSmall(
            "residue needs a higher working order", order=order,
            required=2 * p + 1)

    unit = b_slice.divide_by_var_power(1, p_plus_1)
    transverse_slice = transverse.substitute([MultiPoly.zero(2), y2])
    quotient = (TruncatedSeries(transverse_slice, p)
                * TruncatedSeries(unit, p).inverse())
    modulus = quotient.poly.coefficient((0, p))

    prepared = VectorFieldGerm([shifted_a, shifted_b])
    center = {k[1]: v for k, v in c.terms.items()}
    return SaddleNodeData(p, modulus, center, prepared, order)
