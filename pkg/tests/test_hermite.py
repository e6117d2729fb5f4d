"""Quadrature rule and spectral transform tests.

Expected values marked as derived are computed from independent oracles:
dense trapezoid integration for moments, symbolic Hermite expansions, the
Gaussian moment generating function, and central finite differences.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hclab.errors import DomainError, ParameterError
from hclab.hermite import (
    SpectralFn,
    analyze,
    differentiate,
    gauss_hermite_rule,
    integrate_gamma,
    lp_norm_gamma,
    multiply,
    synthesize,
)


class TestGaussHermiteRule:
    def test_order_one_is_the_mean(self):
        rule = gauss_hermite_rule(1)
        assert rule.nodes.tolist() == [0.0]
        assert rule.weights.tolist() == [1.0]

    def test_order_two_moment_matching(self):
        # matching moments 1, 0, 1, 0 forces nodes +-1 with weight 1/2
        rule = gauss_hermite_rule(2)
        np.testing.assert_allclose(rule.nodes, [-1.0, 1.0], atol=1e-14)
        np.testing.assert_allclose(rule.weights, [0.5, 0.5], atol=1e-14)

    def test_sixth_moment_order_16(self):
        # oracle: dense trapezoid integration of x^6 dgamma on |x| <= 12
        from scipy.integrate import trapezoid

        x = np.linspace(-12.0, 12.0, 2_000_001)
        dense = trapezoid(x**6 * np.exp(-0.5 * x**2), x) / math.sqrt(2 * math.pi)
        rule = gauss_hermite_rule(16)
        by_rule = float(rule.weights @ rule.nodes**6)
        assert abs(by_rule - 15.0) <= 1e-12 * 15.0  # 5!! * 3 = 15
        assert abs(dense - by_rule) <= 1e-7

    @pytest.mark.parametrize("order", [1, 2, 3, 4, 8, 16, 64, 128])
    def test_moments_double_factorial(self, order):
        rule = gauss_hermite_rule(order)
        assert abs(rule.weights.sum() - 1.0) <= 1e-14
        # cap where node**k itself leaves float range (testing artifact,
        # the quadrature is exact for all k <= 2 order - 1)
        x_max = float(np.max(np.abs(rule.nodes))) if order > 1 else 1.0
        k_max = min(2 * order - 1, int(700.0 / math.log(max(x_max, 2.0))))
        moment = 1.0
        for k in range(0, k_max + 1, 2):
            if k:
                moment *= k - 1
            got = float(rule.weights @ rule.nodes**k)
            assert abs(got - moment) <= 1e-12 * moment
            if k + 1 <= k_max:
                odd = float(rule.weights @ rule.nodes ** (k + 1))
                assert abs(odd) <= 1e-12 * max(1.0, moment * math.sqrt(k + 1))

    @pytest.mark.parametrize("order", [2, 16, 128, 512])
    def test_nodes_increasing_and_symmetric(self, order):
        rule = gauss_hermite_rule(order)
        assert np.all(np.diff(rule.nodes) > 0)
        np.testing.assert_array_equal(rule.nodes, -rule.nodes[::-1])
        assert np.all(rule.weights >= 0.0)

    @pytest.mark.parametrize("order", [0, -3, 513])
    def test_order_out_of_range(self, order):
        with pytest.raises(ParameterError):
            gauss_hermite_rule(order)


class TestAnalyzeSynthesize:
    def test_constant(self):
        rule = gauss_hermite_rule(8)
        f = analyze(np.ones(8), rule, 5)
        np.testing.assert_allclose(f.coeffs, [1, 0, 0, 0, 0, 0], atol=1e-14)

    def test_x_squared(self):
        # symbolic: x^2 = h_0 + sqrt(2) h_2 with h_2 = (x^2 - 1)/sqrt(2)
        rule = gauss_hermite_rule(16)
        f = analyze(rule.nodes**2, rule, 4)
        np.testing.assert_allclose(
            f.coeffs, [1, 0, math.sqrt(2), 0, 0], atol=1e-13
        )

    def test_x_cubed(self):
        # symbolic: x^3 = 3 h_1 + sqrt(6) h_3
        rule = gauss_hermite_rule(16)
        f = analyze(rule.nodes**3, rule, 4)
        np.testing.assert_allclose(
            f.coeffs, [0, 3, 0, math.sqrt(6), 0], atol=1e-13
        )

    def test_aliasing_guard(self):
        rule = gauss_hermite_rule(8)
        with pytest.raises(ParameterError):
            analyze(np.ones(8), rule, 8)

    def test_synthesize_constant(self):
        assert synthesize(SpectralFn([1.0]), 3.7) == pytest.approx(1.0, abs=1e-15)

    def test_synthesize_h1(self):
        assert synthesize(SpectralFn([0.0, 1.0]), 2.0) == pytest.approx(2.0)

    def test_synthesize_h2_recovers_x2_minus_1(self):
        f = SpectralFn([0.0, 0.0, math.sqrt(2)])
        assert synthesize(f, 2.0) == pytest.approx(3.0, abs=1e-14)

    def test_synthesize_shapes(self):
        f = SpectralFn([1.0, 2.0])
        out = synthesize(f, np.array([[0.0, 1.0], [2.0, 3.0]]))
        np.testing.assert_allclose(out, [[1.0, 3.0], [5.0, 7.0]])

    @settings(max_examples=50, deadline=None)
    @given(
        arrays(
            np.float64,
            st.integers(1, 41),
            elements=st.floats(-1, 1, allow_nan=False),
        )
    )
    def test_roundtrip_and_parseval(self, coeffs):
        rule = gauss_hermite_rule(64)
        f = SpectralFn(coeffs)
        vals = synthesize(f, rule.nodes)
        back = analyze(vals, rule, f.size - 1)
        np.testing.assert_allclose(back.coeffs, f.coeffs, atol=1e-12)
        parseval = float(np.sum(f.coeffs**2))
        by_quad = integrate_gamma(vals**2, rule)
        assert abs(parseval - by_quad) <= 1e-10 * max(1.0, parseval)


class TestDifferentiate:
    def test_h1(self):
        d = differentiate(SpectralFn([0.0, 1.0]))
        np.testing.assert_allclose(d.coeffs, [1.0])

    def test_x_squared_gives_2x(self):
        d = differentiate(SpectralFn([1.0, 0.0, math.sqrt(2)]))
        np.testing.assert_allclose(d.coeffs, [0.0, 2.0], atol=1e-15)

    def test_h5_gives_sqrt5_h4(self):
        d = differentiate(SpectralFn([0, 0, 0, 0, 0, 1.0]))
        np.testing.assert_allclose(d.coeffs, [0, 0, 0, 0, math.sqrt(5)], atol=1e-15)

    def test_against_finite_differences(self):
        rng = np.random.default_rng(3)
        pts = np.linspace(-4, 4, 11)
        h = 1e-5
        for _ in range(10):
            f = SpectralFn(rng.uniform(-1, 1, size=rng.integers(2, 21)))
            fd = (synthesize(f, pts + h) - synthesize(f, pts - h)) / (2 * h)
            exact = synthesize(differentiate(f), pts)
            np.testing.assert_allclose(exact, fd, atol=1e-7)


class TestLpNormGamma:
    def test_constant(self):
        rule = gauss_hermite_rule(16)
        assert lp_norm_gamma(np.full(16, 3.0), rule, 7.0) == pytest.approx(3.0)

    def test_exponential_mgf(self):
        # oracle: the Gaussian mgf gives ||e^{ax}||_p = e^{p a^2 / 2}
        rule = gauss_hermite_rule(64)
        vals = np.exp(0.5 * rule.nodes)
        assert lp_norm_gamma(vals, rule, 2.0) == pytest.approx(
            math.exp(0.25), rel=1e-10
        )

    def test_geometric_mean_of_exponential(self):
        rule = gauss_hermite_rule(64)
        for a in (0.3, -1.1, 2.0):
            vals = np.exp(a * rule.nodes)
            assert lp_norm_gamma(vals, rule, 0.0) == pytest.approx(1.0, abs=1e-12)

    def test_monotone_in_p(self):
        rule = gauss_hermite_rule(64)
        vals = 2.0 + rule.nodes**2 / math.sqrt(3)
        norms = [lp_norm_gamma(vals, rule, p) for p in (-2, -1, 0, 0.5, 1, 2, 4)]
        assert all(b >= a - 1e-12 for a, b in zip(norms, norms[1:]))

    def test_domain_error_names_node(self):
        rule = gauss_hermite_rule(8)
        vals = np.ones(8)
        vals[3] = 0.0
        with pytest.raises(DomainError, match="node 3"):
            lp_norm_gamma(vals, rule, -1.0)
        with pytest.raises(DomainError):
            lp_norm_gamma(vals, rule, 0.0)

    def test_negative_values_rejected_for_p_geq_1(self):
        rule = gauss_hermite_rule(8)
        vals = np.ones(8)
        vals[0] = -1.0
        with pytest.raises(DomainError):
            lp_norm_gamma(vals, rule, 2.0)


class TestMultiply:
    def test_product_of_quadratics(self):
        rule = gauss_hermite_rule(16)
        f = analyze(rule.nodes**2, rule, 2)
        prod = multiply(f, f, rule)
        got = synthesize(prod, np.array([0.5, 1.5, -2.0]))
        np.testing.assert_allclose(got, np.array([0.5, 1.5, -2.0]) ** 4, atol=1e-12)

    def test_capacity_guard(self):
        rule = gauss_hermite_rule(4)
        f = SpectralFn([0, 0, 0, 1.0])
        with pytest.raises(ParameterError):
            multiply(f, f, rule)


class TestExactness:
    def test_coefficient_quadrature_exactness(self):
        # quadrature of f * h_k equals the k-th coefficient whenever
        # deg f <= 2 order - 1 - k
        rng = np.random.default_rng(11)
        for order in (8, 32):
            rule = gauss_hermite_rule(order)
            for _ in range(20):
                k = int(rng.integers(0, order))
                f = SpectralFn(rng.uniform(-1, 1, size=order))
                hk = SpectralFn(np.eye(k + 1)[k])
                got = integrate_gamma(
                    synthesize(f, rule.nodes) * synthesize(hk, rule.nodes), rule
                )
                want = f.coeffs[k] if k < f.size else 0.0
                assert abs(got - want) <= 1e-11 * max(1.0, abs(want))
