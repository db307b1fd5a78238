from fractions import Fraction as F

import pytest

from germdecomp.germ import (
    CapabilityError,
    axis_multiplicity,
    classify_input,
    discriminant_curve,
    normalize_double_cover,
    singular_locus,
    transversal_data,
)
from germdecomp.polynomials import MPoly, PolyError, parse_poly as P

WORKED = "z3^2 - (z1^3 - z2^2)^2 * (z1^4 - z2^3)"


class TestClassify:
    def test_vertical_double_cover(self):
        g = classify_input(P(WORKED))
        assert g.is_vertical and g.d == 2
        assert g.g == P("(z1^3 - z2^2)^2 * (z1^4 - z2^3)")

    def test_vertical_higher_degree(self):
        g = classify_input(P("z3^3 - z1*z2"))
        assert g.is_vertical and g.d == 3

    def test_general_no_z3(self):
        assert not classify_input(P("z1 + z2")).is_vertical

    def test_general_mixed_z3(self):
        assert not classify_input(P("z3^2 - z1*z3 - z2")).is_vertical

    def test_general_nonunit_leading(self):
        assert not classify_input(P("2*z3^2 - z1")).is_vertical

    def test_zero_raises(self):
        with pytest.raises(PolyError):
            classify_input(MPoly.constant(0))

    def test_not_through_origin_raises(self):
        with pytest.raises(PolyError):
            classify_input(P("z3^2 - z1 + 1"))


class TestSingularLocus:
    def test_worked_example(self):
        rep = singular_locus(classify_input(P(WORKED)))
        assert len(rep.curve_branches) == 1
        branch, mult = rep.curve_branches[0]
        assert mult == 2
        assert branch in (P("z1^3 - z2^2"), P("z2^2 - z1^3"))

    def test_squarefree_g_has_no_curve(self):
        rep = singular_locus(classify_input(P("z3^2 - z1^2 - z2^2")))
        assert rep.curve_branches == ()

    def test_d3_includes_simple_factors(self):
        rep = singular_locus(classify_input(P("z3^3 - z1*z2")))
        eqs = {b for b, _ in rep.curve_branches}
        assert P("z1") in eqs and P("z2") in eqs

    def test_general_germ_rejected(self):
        with pytest.raises(CapabilityError):
            singular_locus(classify_input(P("z1*z3 - z2")))


class TestNormalization:
    def test_worked_example(self):
        n = normalize_double_cover(classify_input(P(WORKED)))
        assert n.f_bar == P("z3^2 - z1^4 + z2^3")
        assert n.q in (P("z1^3 - z2^2"), P("z2^2 - z1^3"))
        assert not n.smooth_after_normalization
        assert "w" in n.substitution

    def test_perfect_square_becomes_smooth(self):
        n = normalize_double_cover(classify_input(P("z3^2 - z1^2*z2^2")))
        assert n.smooth_after_normalization
        assert n.s.is_constant()

    def test_reconstruction_property(self):
        germ = classify_input(P(WORKED))
        n = normalize_double_cover(germ)
        assert n.q * n.q * n.s == germ.g

    def test_d3_not_supported(self):
        with pytest.raises(CapabilityError):
            normalize_double_cover(classify_input(P("z3^3 - z1*z2")))


class TestDiscriminant:
    def test_worked_example(self):
        disc = discriminant_curve(P("z3^2 - z1^4 + z2^3"))
        assert disc in (P("z1^4 - z2^3"), P("z2^3 - z1^4"))

    def test_squarefree_output(self):
        disc = discriminant_curve(P("z3^2 - z1^2*z2"))
        assert disc in (P("z1^2*z2"), P("-z1^2*z2"), P("z1*z2"), P("-z1*z2"))
        # squarefree: the square on z1 must be gone
        assert disc.degree(0) == 1

    def test_no_z3_dependence_raises(self):
        with pytest.raises(CapabilityError):
            discriminant_curve(P("z1^2 - z2"))

    def test_non_reduced_raises(self):
        with pytest.raises(PolyError):
            discriminant_curve(P("(z3 - z1)^2"))

    def test_constant_discriminant_raises(self):
        with pytest.raises(PolyError):
            discriminant_curve(P("z3^2 - 1"))


class TestAxisMultiplicity:
    def test_worked_example(self):
        assert axis_multiplicity(P("z1^3 - z2^2"), 0) == 2

    def test_other_axis(self):
        assert axis_multiplicity(P("z1^3 - z2^2"), 1) == 3

    def test_z3_rejected(self):
        with pytest.raises(PolyError):
            axis_multiplicity(P("z3 - z1"), 0)

    def test_non_generic_leading_coefficient(self):
        with pytest.raises(CapabilityError):
            axis_multiplicity(P("z1*z2^2 + z2"), 0)

    def test_no_fiber_dependence(self):
        with pytest.raises(CapabilityError):
            axis_multiplicity(P("z1^2"), 0)


class TestTransversal:
    def test_worked_example_slice(self):
        t = transversal_data(2, 2)
        assert t.milnor_number == 1
        assert t.link_components == 2

    def test_coprime_slice(self):
        t = transversal_data(2, 3)
        assert t.milnor_number == 2
        assert t.link_components == 1

    def test_bounds(self):
        with pytest.raises(PolyError):
            transversal_data(1, 2)
        with pytest.raises(PolyError):
            transversal_data(2, 1)
