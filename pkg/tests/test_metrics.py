import math
from fractions import Fraction as F

import numpy as np
import pytest

from germdecomp.metrics import (
    AnnulusFamily,
    CheegerNagase,
    ConeMetric,
    HsiangPati,
    LinearMonodromy,
    MappingTorusCone,
    MetricError,
    ParamCurve,
    bilipschitz_ratio,
    cn_annulus_map,
    curve_length,
    fiber_diameter,
    fit_shrink_exponent,
    flat_circle,
    flat_square,
    metric_tensor_at,
    verify_cn_identity,
)

TWO_PI = 2 * math.pi


def theta_loop(t):
    return ParamCurve(0.0, 1.0, lambda u: [t, u], lambda u: [0.0, 1.0])


def fiber_loop(t):
    return ParamCurve(0.0, 1.0, lambda u: [t, 0.0, u, 0.0],
                      lambda u: [0.0, 0.0, 1.0, 0.0])


class TestTensor:
    def test_cone_flat_base(self):
        g = metric_tensor_at(ConeMetric(flat_circle()), [0.5, 1.0])
        assert np.allclose(g, np.diag([1.0, 0.25]))

    def test_cheeger_nagase_example(self):
        cn = CheegerNagase(F(1), F(4, 3))
        g = metric_tensor_at(cn, [0.5, 0.0, 0.5, 0.0])
        h = (0.5 + 0.5 ** (1 / 3)) / TWO_PI
        assert np.allclose(np.diag(g), [1.0, 0.25, 0.25, 0.25 * h * h])

    def test_hsiang_pati_no_shrink_at_one(self):
        g = metric_tensor_at(HsiangPati(F(4, 3)), [1.0, 0.3, 0.2, 0.7])
        assert np.allclose(g, np.eye(4))

    def test_t_zero_rejected(self):
        with pytest.raises(MetricError):
            metric_tensor_at(ConeMetric(flat_circle()), [0.0, 0.0])

    def test_wrong_dimension_rejected(self):
        with pytest.raises(MetricError):
            metric_tensor_at(HsiangPati(F(2)), [0.5, 0.0])

    def test_invalid_rates_rejected(self):
        with pytest.raises(MetricError):
            HsiangPati(F(1, 2))
        with pytest.raises(MetricError):
            CheegerNagase(F(4, 3), F(4, 3))
        with pytest.raises(MetricError):
            AnnulusFamily(F(2), F(3, 2))

    @pytest.mark.parametrize("chart", [
        ConeMetric(flat_square()),
        HsiangPati(F(4, 3)),
        CheegerNagase(F(1), F(4, 3)),
        AnnulusFamily(F(1), F(2)),
        MappingTorusCone(F(3, 2),
                         monodromy=LinearMonodromy(((0.0, -1.0), (1.0, 0.0)))),
    ])
    def test_positive_definite(self, chart):
        rng = np.random.default_rng(5)
        for _ in range(1000):
            p = [rng.uniform(0.05, 1.0)] + list(
                rng.uniform(0.0, 1.0, chart.dimension - 1))
            if isinstance(chart, AnnulusFamily):
                p[2] = rng.uniform(1.0, 2.0)
            vals = np.linalg.eigvalsh(metric_tensor_at(chart, p))
            assert np.all(vals > 0)


class TestLength:
    def test_radial_segment(self):
        seg = ParamCurve(0.2, 1.0, lambda u: [u, 0.0], lambda u: [1.0, 0.0])
        assert curve_length(ConeMetric(flat_circle()), seg) == pytest.approx(
            0.8, abs=1e-12)

    def test_theta_loop_hsiang_pati(self):
        chart = HsiangPati(F(4, 3))
        loop = ParamCurve(0.0, 1.0, lambda u: [0.3, u, 0.1, 0.1],
                          lambda u: [0.0, 1.0, 0.0, 0.0])
        assert curve_length(chart, loop) == pytest.approx(0.3, abs=1e-10)

    def test_psi_circle_annulus(self):
        chart = AnnulusFamily(F(4, 3), F(2))
        t = 0.2
        loop = ParamCurve(0.0, TWO_PI, lambda u: [t, 0.0, 2.0, u],
                          lambda u: [0.0, 0.0, 0.0, 1.0])
        assert curve_length(chart, loop) == pytest.approx(
            TWO_PI * t ** (4 / 3), abs=1e-10)

    def test_quadrature_convergence(self):
        chart = CheegerNagase(F(1), F(4, 3))
        curve = ParamCurve(0.0, 1.0,
                           lambda u: [0.4 + 0.3 * u, 0.5 * u,
                                      0.5 + 0.4 * math.sin(u), 0.3 * u])
        a = curve_length(chart, curve, steps=32)
        b = curve_length(chart, curve, steps=64)
        assert abs(a - b) < 1e-8

    def test_exact_fiber_scaling_law(self):
        for chart in (HsiangPati(F(4, 3)), MappingTorusCone(F(3, 2))):
            ref = curve_length(chart, fiber_loop(1.0))
            for t in (0.5, 0.1, 0.01):
                got = curve_length(chart, fiber_loop(t))
                assert got == pytest.approx(
                    t ** float(chart.nu) * ref, rel=1e-10)

    def test_annulus_radial_width(self):
        chart = AnnulusFamily(F(1), F(4, 3))
        for t in (0.5, 0.1, 0.01):
            seg = ParamCurve(0.0, 1.0, lambda u, t=t: [t, 0.0, 1.0 + u, 0.0],
                             lambda u: [0.0, 0.0, 1.0, 0.0])
            width = curve_length(chart, seg)
            assert width == pytest.approx(abs(t - t ** (4 / 3)), abs=1e-10)

    def test_degenerate_interval_rejected(self):
        seg = ParamCurve(1.0, 1.0, lambda u: [u, 0.0])
        with pytest.raises(MetricError):
            curve_length(ConeMetric(flat_circle()), seg)


class TestFiberDiameter:
    def test_flat_square_diagonal(self):
        assert fiber_diameter(HsiangPati(F(1)), 0.5) == pytest.approx(
            0.5 * math.sqrt(2), abs=1e-6)

    def test_no_shrink_at_one(self):
        assert fiber_diameter(HsiangPati(F(4, 3)), 1.0) == pytest.approx(
            math.sqrt(2), abs=1e-12)

    def test_fractional_rate(self):
        assert fiber_diameter(HsiangPati(F(4, 3)), 0.01) == pytest.approx(
            0.01 ** (4 / 3) * math.sqrt(2), abs=1e-6)

    def test_cone_has_no_fiber(self):
        with pytest.raises(MetricError):
            fiber_diameter(ConeMetric(flat_circle()), 0.5)

    def test_t_out_of_range(self):
        with pytest.raises(MetricError):
            fiber_diameter(HsiangPati(F(1)), 1.5)


class TestShrinkFit:
    @pytest.mark.parametrize("nu", [F(1), F(4, 3), F(3, 2), F(2)])
    def test_hsiang_pati_rates(self, nu):
        fit = fit_shrink_exponent(HsiangPati(nu), fiber_loop,
                                  [1e-1, 1e-2, 1e-3])
        assert abs(fit.exponent - float(nu)) <= 1e-2
        assert fit.metrically_conical == (nu == 1)

    def test_cone_theta_loop_is_conical(self):
        fit = fit_shrink_exponent(ConeMetric(flat_circle()), theta_loop,
                                  [1e-1, 1e-2, 1e-3])
        assert abs(fit.exponent - 1.0) <= 1e-3
        assert fit.metrically_conical

    def test_cn_theta_loop_shrinks_at_inner_rate(self):
        chart = CheegerNagase(F(1), F(4, 3))
        loop = lambda t: ParamCurve(0.0, 1.0, lambda u: [t, 0.0, 0.0, u],
                                    lambda u: [0.0, 0.0, 0.0, 1.0])
        fit = fit_shrink_exponent(chart, loop, [1e-1, 1e-2, 1e-3])
        assert abs(fit.exponent - 4 / 3) <= 1e-2

    def test_too_few_samples(self):
        with pytest.raises(MetricError):
            fit_shrink_exponent(HsiangPati(F(1)), fiber_loop, [0.1, 0.01])

    def test_narrow_sweep_rejected(self):
        with pytest.raises(MetricError):
            fit_shrink_exponent(HsiangPati(F(1)), fiber_loop,
                                [0.1, 0.2, 0.3])


class TestCnIdentity:
    def test_exact_identity(self):
        rng = np.random.default_rng(1)
        samples = [(rng.uniform(0.05, 1.0), rng.uniform(1.0, 2.0),
                    rng.uniform(0.0, TWO_PI)) for _ in range(200)]
        for pair in [(F(1), F(4, 3)), (F(1), F(2)), (F(4, 3), F(3, 2))]:
            assert verify_cn_identity(*pair, samples) <= 1e-12

    def test_degenerate_equal_rates(self):
        assert verify_cn_identity(F(4, 3), F(4, 3), [(0.5, 1.5, 0.0)]) == 0.0

    def test_t_one_contributes_nothing(self):
        assert verify_cn_identity(F(1), F(2), [(1.0, 1.5, 1.0)]) <= 1e-15

    def test_bad_rates(self):
        with pytest.raises(MetricError):
            verify_cn_identity(F(2), F(1), [(0.5, 1.5, 0.0)])


class TestBilipschitz:
    def seg(self):
        return ParamCurve(0.0, 1.0,
                          lambda u: [0.5, 0.3 * u, 0.1 + 0.5 * u])

    def test_identity_is_exactly_one(self):
        chart = ConeMetric(flat_square())
        assert bilipschitz_ratio(chart, chart, lambda p: p, [self.seg()]) == 1.0

    def test_uniform_scaling(self):
        a = ConeMetric(flat_square())
        b = ConeMetric(flat_square(2.0))
        assert bilipschitz_ratio(a, b, lambda p: p, [self.seg()]) == \
            pytest.approx(2.0, abs=1e-9)

    def test_annulus_cn_isometry(self):
        ann = AnnulusFamily(F(1), F(4, 3))
        cn = CheegerNagase(F(1), F(4, 3))
        arcs = []
        for t in (0.3, 0.7):
            arcs.append(ParamCurve(0.0, 1.0,
                                   lambda u, t=t: [t, 0.0, 1.0 + 0.8 * u, 0.0]))
            arcs.append(ParamCurve(0.0, 1.0,
                                   lambda u, t=t: [t, 0.0, 1.5, 0.2 * u]))
        ratio = bilipschitz_ratio(ann, cn, lambda p: cn_annulus_map(ann, p),
                                  arcs)
        assert ratio == pytest.approx(1.0, abs=1e-9)

    def test_no_curves_rejected(self):
        chart = ConeMetric(flat_square())
        with pytest.raises(MetricError):
            bilipschitz_ratio(chart, chart, lambda p: p, [])


class TestMappingTorus:
    def test_identity_monodromy_is_product(self):
        chart = MappingTorusCone(F(3, 2))
        g1 = metric_tensor_at(chart, [0.5, 0.1, 0.2, 0.3])
        g2 = metric_tensor_at(chart, [0.5, 3.0, 0.2, 0.3])
        assert np.allclose(g1, g2)

    def test_collar_interpolation(self):
        mono = LinearMonodromy(((2.0, 0.0), (0.0, 1.0)))
        chart = MappingTorusCone(F(3, 2), monodromy=mono)
        near0 = metric_tensor_at(chart, [0.5, 0.01, 0.2, 0.3])
        near2pi = metric_tensor_at(chart, [0.5, TWO_PI - 0.01, 0.2, 0.3])
        # pullback through diag(2,1) multiplies the y1-coefficient by 4
        assert near2pi[2, 2] == pytest.approx(4 * near0[2, 2])
        mid = metric_tensor_at(chart, [0.5, math.pi, 0.2, 0.3])
        assert near0[2, 2] < mid[2, 2] < near2pi[2, 2]
