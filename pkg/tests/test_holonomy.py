"""Return-map multipliers, formal germs, invariant-function machinery."""

from fractions import Fraction

import pytest

from folsing.errors import (
    DicriticalInput,
    NonIntegerResidues,
    WrongClass,
    ZeroBaseEigenvalue,
)
from folsing.holonomy import (
    ComplexMultiplier,
    ExactMultiplier,
    GermSeries,
    construct_first_integral_homogeneous,
    germ_order,
    linear_holonomy,
    mattei_moussu_criterion,
    projective_holonomy_generators,
    saddle_node_holonomy,
    verify_first_integral,
)
from folsing.parsing import parse_field, parse_form, parse_poly
from folsing.poly import MultiPoly, OneFormGerm, dualize
from folsing.scalars import GaussianRational, TauScalar


class TestExactMultiplier:
    def test_saddle_two_three(self):
        m = linear_holonomy(parse_field("2*x*ddx - 3*y*ddy"))
        assert isinstance(m, ExactMultiplier)
        assert m.exponent == Fraction(-3, 2)
        assert m.order == 2
        assert m.as_gaussian_or_none() == GaussianRational(-1, 0)

    def test_balanced_saddle_is_trivial(self):
        m = linear_holonomy(parse_field("x*ddx - y*ddy"))
        assert m.order == 1
        assert m.as_gaussian_or_none() == GaussianRational(1, 0)

    def test_quarter_turn(self):
        m = linear_holonomy((Fraction(4), Fraction(1)))
        assert m.exponent == Fraction(1, 4)
        assert m.as_gaussian_or_none() == GaussianRational(0, 1)

    def test_group_structure(self):
        a = ExactMultiplier(Fraction(1, 3))
        b = ExactMultiplier(Fraction(1, 6))
        assert (a * b).order == 2
        assert (a ** 3).order == 1
        assert a * a.inverse() == ExactMultiplier(0)

    def test_zero_base(self):
        with pytest.raises(ZeroBaseEigenvalue):
            linear_holonomy((Fraction(0), Fraction(1)))

    def test_complex_ratio(self):
        m = linear_holonomy(parse_field("x*ddx + i*y*ddy"))
        assert isinstance(m, ComplexMultiplier)
        assert m.modulus() == pytest.approx(2.718281828 ** (-2 * 3.14159265), rel=1e-6)


class TestSaddleNodeHolonomy:
    def test_first_deviation_is_tau(self):
        for p in (1, 2, 3):
            h = saddle_node_holonomy(p, 0, order=p + 2)
            assert h.coefficient(p + 1) == TauScalar.tau(1)
            for k in range(2, p + 1):
                assert h.coefficient(k).is_zero()

    def test_zero_modulus_geometric(self):
        h = saddle_node_holonomy(1, 0, order=6)
        for k in range(1, 7):
            assert h.coefficient(k) == TauScalar({k - 1: GaussianRational(1)})

    def test_degree_three_with_modulus(self):
        h = saddle_node_holonomy(1, Fraction(2), order=3)
        assert h.coefficient(2) == TauScalar.tau(1)
        assert h.coefficient(3) == TauScalar(
            {2: GaussianRational(1), 1: GaussianRational(-2)})

    def test_contact_two_fifth_coefficient(self):
        h = saddle_node_holonomy(2, 0, order=5)
        assert h.coefficient(4).is_zero()
        assert h.coefficient(5) == TauScalar({2: GaussianRational(Fraction(3, 2))})

    def test_compose_identity(self):
        h = saddle_node_holonomy(1, 0, order=5)
        eye = GermSeries.identity(5)
        assert h.compose(eye).coeffs == h.coeffs


class TestGermOrder:
    def test_root_of_unity(self):
        assert germ_order(ExactMultiplier(Fraction(-3, 2))).order == 2
        assert germ_order(ExactMultiplier(Fraction(5))).order == 1

    def test_complex_infinite(self):
        r = germ_order(ComplexMultiplier(GaussianRational(0, 1)))
        assert r.kind == "infinite"

    def test_parabolic_obstruction(self):
        h = saddle_node_holonomy(2, 0, order=6)
        r = germ_order(h)
        assert r.kind == "infinite"
        assert r.obstruction[0] == 3
        assert r.obstruction[1] == TauScalar.tau(1)

    def test_identity_undecided(self):
        assert germ_order(GermSeries.identity(6)).kind == "undecided"


class TestNecessaryConditions:
    def test_saddles_pass(self):
        assert mattei_moussu_criterion(parse_field("x*ddx - y*ddy")).passes()
        assert mattei_moussu_criterion(parse_field("2*x*ddx - 3*y*ddy")).passes()

    def test_hamiltonian_cusp_passes(self):
        verdict = mattei_moussu_criterion(parse_field("2*y*ddx + 3*x^2*ddy"))
        assert verdict.passes()

    def test_zero_eigenvalue_fails(self):
        verdict = mattei_moussu_criterion(parse_field("x^2*ddx + (y - x)*ddy"))
        assert verdict.verdict == "FailsNecessaryConditions"
        assert any("zero eigenvalue" in r for r in verdict.reasons)

    def test_nonreal_ratio_fails(self):
        verdict = mattei_moussu_criterion(parse_field("(x - y)*ddx + (x + y)*ddy"))
        assert verdict.verdict == "FailsNecessaryConditions"
        assert any("nonreal" in r for r in verdict.reasons)

    def test_positive_ratio_fails(self):
        verdict = mattei_moussu_criterion(parse_field("5/2*x*ddx + y*ddy"))
        assert verdict.verdict == "FailsNecessaryConditions"
        assert any("positive real ratio" in r for r in verdict.reasons)

    def test_dicritical_fails(self):
        verdict = mattei_moussu_criterion(parse_field("x*ddx + y*ddy"))
        assert verdict.verdict == "FailsNecessaryConditions"
        assert any("dicritical" in r for r in verdict.reasons)

    def test_resonant_obstruction_fails(self):
        verdict = mattei_moussu_criterion(parse_field("(x + x^2*y)*ddx - y*ddy"))
        assert verdict.verdict == "FailsNecessaryConditions"
        assert any("resonant part" in r for r in verdict.reasons)

    def test_irrational_ratio_undecided(self):
        verdict = mattei_moussu_criterion(parse_field("y*ddx + (x + y)*ddy"))
        assert verdict.verdict == "Undecided"

    def test_common_factor_stripped(self):
        # d(x^2 y^3) = x y^2 (2y dx + 3x dy): the repeated-factor locus is
        # divided out and the reduced 2:-3 saddle decides the question
        f = parse_poly("x^2 * y^3")
        form = OneFormGerm(f.derivative(0), f.derivative(1))
        verdict = mattei_moussu_criterion(form)
        assert verdict.passes()

    def test_json_shape(self):
        verdict = mattei_moussu_criterion(parse_field("x*ddx - y*ddy"))
        js = verdict.to_json()
        assert js["verdict"] == "PassesNecessaryConditions"
        assert js["leaves"][0]["status"] == "ok"


def hamiltonian_form(n1, n2, n3):
    f = parse_poly("x^%d * y^%d * (x - y)^%d" % (n1, n2, n3))
    from folsing.poly import OneFormGerm
    return OneFormGerm(f.derivative(0), f.derivative(1)), f


class TestFirstIntegral:
    def test_three_line_product(self):
        form, f = hamiltonian_form(1, 1, 1)
        result = construct_first_integral_homogeneous(form)
        assert result.residues == [Fraction(1, 3)] * 3
        assert sorted(n for _, n in result.factors) == [1, 1, 1]
        assert verify_first_integral(form, result.integral)

    def test_unbalanced_exponents(self):
        form, f = hamiltonian_form(2, 1, 0)
        result = construct_first_integral_homogeneous(form)
        exps = {str(q): n for q, n in result.factors}
        assert exps == {"x": 2, "y": 1}
        assert result.residues == [Fraction(2, 3), Fraction(1, 3)]

    def test_common_power_reduces(self):
        form, f = hamiltonian_form(2, 2, 0)
        result = construct_first_integral_homogeneous(form)
        assert result.integral == parse_poly("x*y")

    def test_gaussian_cluster(self):
        f = parse_poly("x^2 + y^2")
        from folsing.poly import OneFormGerm
        form = OneFormGerm(f.derivative(0), f.derivative(1))
        result = construct_first_integral_homogeneous(form)
        assert result.integral == f
        assert len(result.factors) == 2

    def test_irrational_cluster_stays_rational(self):
        f = parse_poly("x*y^2 - 2*x^3")
        from folsing.poly import OneFormGerm
        form = OneFormGerm(f.derivative(0), f.derivative(1))
        result = construct_first_integral_homogeneous(form)
        assert result.integral == f or result.integral == f.scale(-1)
        degrees = sorted(sum(max(e) for e in q.terms) for q, _ in result.factors)
        assert len(result.factors) == 2

    def test_saddle_duality_route(self):
        result = construct_first_integral_homogeneous(parse_field("2*x*ddx - y*ddy"))
        assert result.integral == parse_poly("x*y^2")

    def test_dicritical_rejected(self):
        with pytest.raises(DicriticalInput):
            construct_first_integral_homogeneous(parse_field("x*ddx + y*ddy"))

    def test_node_rejected(self):
        with pytest.raises(NonIntegerResidues):
            construct_first_integral_homogeneous(parse_field("x*ddx + 2*y*ddy"))

    def test_complex_residues_rejected(self):
        with pytest.raises(NonIntegerResidues):
            construct_first_integral_homogeneous(parse_field("x*ddx + i*y*ddy"))

    def test_inhomogeneous_rejected(self):
        with pytest.raises(WrongClass):
            construct_first_integral_homogeneous(
                parse_form("(x + x^2)*dx + y*dy"))


class TestProjectiveGenerators:
    def test_three_loops_close_up(self):
        form, _ = hamiltonian_form(1, 1, 1)
        result = construct_first_integral_homogeneous(form)
        gens = projective_holonomy_generators(result)
        assert len(gens) == 3
        assert all(g.exponent == Fraction(-1, 3) for g in gens)
        assert sum(g.exponent for g in gens) == -1

    def test_weighted_loops(self):
        form, _ = hamiltonian_form(2, 1, 0)
        result = construct_first_integral_homogeneous(form)
        gens = projective_holonomy_generators(result)
        assert sorted(g.exponent for g in gens) == [Fraction(-2, 3), Fraction(-1, 3)]

    def test_cluster_contributes_conjugate_pair(self):
        f = parse_poly("x*y^2 - 2*x^3")
        from folsing.poly import OneFormGerm
        form = OneFormGerm(f.derivative(0), f.derivative(1))
        result = construct_first_integral_homogeneous(form)
        gens = projective_holonomy_generators(result)
        assert len(gens) == 3
        assert sum(g.exponent for g in gens) == -1
