"""Field towers: construction caps, arithmetic, factorization, embeddings."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from folsing.errors import (
    DivisionByZero,
    ExtensionDegreeExceeded,
    NotMonic,
    ReducibleMinimalPolynomial,
    TowerDepthExceeded,
    TowerMismatch,
)
from folsing.scalars import GaussianRational
from folsing.towers import (
    TRIVIAL,
    TRIVIAL_RATIONAL,
    FieldTower,
    factor_univariate,
    roots_in_tower,
    tp_deg,
    tp_divmod,
    tp_gcd,
    tp_mul,
    tp_resultant,
    tp_trim,
)


@pytest.fixture(scope="module")
def sqrt2_tower():
    return TRIVIAL.adjoin_root([-2, 0, 1], name="r2")


@pytest.fixture(scope="module")
def deep_tower(sqrt2_tower):
    T2, _ = sqrt2_tower
    return T2.adjoin_root([T2.element(-2), T2.zero(), T2.zero(), T2.one()], name="c3")


class TestConstruction:
    def test_gaussian_base_contains_i(self):
        e = TRIVIAL.element(GaussianRational(0, 1))
        assert (e * e + 1).is_zero()

    def test_rational_base_rejects_i(self):
        with pytest.raises(TowerMismatch):
            TRIVIAL_RATIONAL.element(GaussianRational(0, 1))

    def test_adjoin_i_over_rationals(self):
        T, j = TRIVIAL_RATIONAL.adjoin_root([1, 0, 1], name="j")
        assert (j * j + 1).is_zero()
        assert T.ext_degree() == 2

    def test_adjoin_i_over_gaussian_fails(self):
        with pytest.raises(ReducibleMinimalPolynomial):
            TRIVIAL.adjoin_root([1, 0, 1])

    def test_reducible_rejected(self):
        with pytest.raises(ReducibleMinimalPolynomial):
            TRIVIAL.adjoin_root([-4, 0, 1])  # (t-2)(t+2)

    def test_not_monic_rejected(self):
        with pytest.raises(NotMonic):
            TRIVIAL.adjoin_root([-2, 0, 2])

    def test_degree_cap(self):
        with pytest.raises(ExtensionDegreeExceeded):
            TRIVIAL.adjoin_root([2, 0, 0, 0, 0, 0, 0, 1])  # degree 7

    def test_depth_cap(self, deep_tower):
        T3, _ = deep_tower
        T4, _ = T3.adjoin_root([T3.element(-5), T3.zero(), T3.one()], name="r5")
        assert T4.depth == 3
        with pytest.raises(TowerDepthExceeded):
            T4.adjoin_root([T4.element(-7), T4.zero(), T4.one()])

    def test_caps_configurable(self):
        T, _ = TRIVIAL.adjoin_root([2, 0, 0, 0, 0, 0, 0, 1], degree_cap=8)
        assert T.ext_degree() == 7


class TestArithmetic:
    def test_generator_satisfies_minpoly(self, sqrt2_tower):
        _, r2 = sqrt2_tower
        assert (r2 * r2 - 2).is_zero()

    def test_inverse(self, sqrt2_tower):
        _, r2 = sqrt2_tower
        v = r2 + Fraction(1, 3)
        assert (v * v.inverse()).is_one()
        with pytest.raises(DivisionByZero):
            (r2 - r2).inverse()

    def test_deep_arith(self, deep_tower):
        T3, c3 = deep_tower
        r2 = T3.gen(1)
        v = c3 * r2 + 1
        assert ((v * v.inverse()) - 1).is_zero()
        assert (c3 ** 3 - 2).is_zero()
        assert ((c3 + r2) - r2 - c3).is_zero()

    def test_prefix_lift(self, sqrt2_tower, deep_tower):
        T2, r2 = sqrt2_tower
        T3, c3 = deep_tower
        assert (r2 + c3) == (T3.element(r2) + c3)
        assert T2.is_prefix_of(T3)

    def test_unrelated_towers_rejected(self, sqrt2_tower):
        _, r2 = sqrt2_tower
        _, r3 = TRIVIAL.adjoin_root([-3, 0, 1], name="r3")
        with pytest.raises(TowerMismatch):
            r2 + r3

    def test_embedding_consistency(self, deep_tower):
        T3, c3 = deep_tower
        r2 = T3.gen(1)
        v = c3 * c3 + r2
        z = complex(v)
        assert abs(z - (complex(c3) ** 2 + complex(r2))) < 1e-9

    def test_embedding_is_a_root(self, sqrt2_tower):
        _, r2 = sqrt2_tower
        z = complex(r2)
        assert abs(z * z - 2) < 1e-9

    def test_json_roundtrip_shape(self, sqrt2_tower):
        T2, r2 = sqrt2_tower
        assert r2.to_json() == ["0", "1"]
        d = T2.describe()
        assert d["base"] == "gaussian"
        assert d["levels"][0]["minpoly"] == ["-2", "0", "1"]


coeff = st.integers(min_value=-5, max_value=5)


class TestPolyToolkit:
    @given(st.lists(coeff, min_size=1, max_size=5), st.lists(coeff, min_size=1, max_size=4))
    @settings(max_examples=60, deadline=None)
    def test_divmod_identity(self, ps, qs):
        P = [TRIVIAL.element(c) for c in ps]
        Q = tp_trim([TRIVIAL.element(c) for c in qs])
        if not Q:
            return
        q, r = tp_divmod(P, Q)
        assert tp_trim(tp_mul(q, Q) + [TRIVIAL.zero()] * 0) is not None
        from folsing.towers import tp_add
        assert tp_trim(tp_add(tp_mul(q, Q), r)) == tp_trim(P)
        assert tp_deg(r) < tp_deg(Q)

    def test_gcd(self):
        T = TRIVIAL
        p = [T.element(c) for c in (-1, 0, 1)]       # t^2-1
        q = [T.element(c) for c in (1, 1)]           # t+1
        g = tp_gcd(p, q)
        assert [str(c) for c in g] == ["1", "1"]

    def test_resultant_shared_root(self):
        T = TRIVIAL
        p = [T.element(c) for c in (-1, 0, 1)]
        q = [T.element(c) for c in (-1, 1)]
        assert tp_resultant(p, q).is_zero()


class TestFactorization:
    def test_gaussian_split(self):
        _, fac = factor_univariate([1, 0, 1], TRIVIAL)
        assert len(fac) == 2 and all(m == 1 for _, m in fac)

    def test_rational_base_keeps_irreducible(self):
        _, fac = factor_univariate([1, 0, 1], TRIVIAL_RATIONAL)
        assert len(fac) == 1 and tp_deg(fac[0][0]) == 2

    def test_multiplicities(self):
        _, fac = factor_univariate([0, 0, 1, 2, 1], TRIVIAL)  # t^2 (t+1)^2
        ms = sorted(m for _, m in fac)
        assert ms == [2, 2]

    def test_unit_preserved(self):
        u, fac = factor_univariate([0, 3], TRIVIAL)
        assert str(u) == "3" and len(fac) == 1

    def test_split_in_tower(self, sqrt2_tower):
        T2, r2 = sqrt2_tower
        _, fac = factor_univariate([T2.element(-2), T2.zero(), T2.one()], T2)
        assert len(fac) == 2
        roots, hard = roots_in_tower([T2.element(-2), T2.zero(), T2.one()], T2)
        assert not hard
        assert sorted(str(r) for r, _ in roots) == ["(-1)*r2", "r2"]

    def test_deep_tower_factor(self, deep_tower):
        T3, c3 = deep_tower
        # (t - c3)(t - r2) expanded, must re-split
        r2 = T3.gen(1)
        p = tp_mul([-c3, T3.one()], [-r2, T3.one()])
        roots, hard = roots_in_tower(p, T3)
        assert not hard and len(roots) == 2

    def test_irreducible_stays(self, sqrt2_tower):
        T2, _ = sqrt2_tower
        _, fac = factor_univariate([T2.element(-3), T2.zero(), T2.one()], T2)
        assert len(fac) == 1 and tp_deg(fac[0][0]) == 2

    @given(st.lists(st.integers(min_value=-3, max_value=3), min_size=2, max_size=4))
    @settings(max_examples=40, deadline=None)
    def test_factor_product_reconstructs(self, cs):
        P = tp_trim([TRIVIAL.element(c) for c in cs])
        if tp_deg(P) < 1:
            return
        unit, fac = factor_univariate(P, TRIVIAL)
        acc = [TRIVIAL.element(unit)]
        for f, m in fac:
            for _ in range(m):
                acc = tp_mul(acc, f)
        assert tp_trim(acc) == P
