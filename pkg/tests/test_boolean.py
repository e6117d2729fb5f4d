"""Hypercube analysis, noise operator, and two-point sharpness tests.

Brute-force enumeration over all 2^n points is the oracle throughout; the
closed-form critical noise rate is treated as a hypothesis confirmed by
the sweeps.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hclab.boolean import (
    boolean_hyper_check,
    critical_rho,
    cube_points,
    noise_operator,
    tensor_power,
    walsh_analyze,
    walsh_synthesize,
)
from hclab.errors import DomainError, ParameterError
from hclab.flow import critical_time


class TestWalshTransform:
    def test_constant(self):
        f = walsh_analyze([1.0, 1.0])
        np.testing.assert_array_equal(f.coeffs, [1.0, 0.0])
        assert f.coeff(()) == 1.0

    def test_single_coordinate(self):
        # index 0 is the point x = +1, index 1 is x = -1
        f = walsh_analyze([1.0, -1.0])
        np.testing.assert_array_equal(f.coeffs, [0.0, 1.0])
        assert f.coeff({1}) == 1.0

    def test_parity_on_two_bits(self):
        pts = cube_points(2)
        f = walsh_analyze(pts[:, 0] * pts[:, 1])
        np.testing.assert_array_equal(f.coeffs, [0.0, 0.0, 0.0, 1.0])
        assert f.coeff({1, 2}) == 1.0
        assert f.coeff_map()[frozenset({1, 2})] == 1.0

    def test_bad_length(self):
        with pytest.raises(ParameterError):
            walsh_analyze([1.0, 2.0, 3.0])

    def test_brute_force_characters(self):
        # coefficient of S is the mean of f * chi_S over all points
        rng = np.random.default_rng(1)
        for n in (1, 2, 3, 4):
            vals = rng.normal(size=1 << n)
            f = walsh_analyze(vals)
            pts = cube_points(n)
            for mask in range(1 << n):
                chi = np.prod(
                    pts[:, [j for j in range(n) if mask >> j & 1]], axis=1
                )
                want = float(np.mean(vals * chi))
                assert f.coeffs[mask] == pytest.approx(want, abs=1e-13)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 6), st.integers(0, 2**31 - 1))
    def test_roundtrip_and_parseval(self, n, seed):
        rng = np.random.default_rng(seed)
        vals = rng.normal(size=1 << n)
        f = walsh_analyze(vals)
        np.testing.assert_allclose(walsh_synthesize(f), vals, atol=1e-12)
        assert float(np.sum(f.coeffs**2)) == pytest.approx(
            float(np.mean(vals**2)), abs=1e-12
        )


class TestNoiseOperator:
    def test_identity_at_one(self):
        f = walsh_analyze([0.3, 1.7, -0.2, 0.9])
        np.testing.assert_array_equal(noise_operator(f, 1.0).coeffs, f.coeffs)

    def test_collapse_at_zero(self):
        f = walsh_analyze([0.3, 1.7, -0.2, 0.9])
        out = walsh_synthesize(noise_operator(f, 0.0))
        np.testing.assert_allclose(out, np.mean([0.3, 1.7, -0.2, 0.9]), atol=1e-15)

    def test_two_point_formula(self):
        # T_rho(1 + eps x) = 1 + rho eps x via the (1 +- rho)/2 average
        eps, rho = 0.3, 0.41
        f = walsh_analyze([1 + eps, 1 - eps])
        out = walsh_synthesize(noise_operator(f, rho))
        np.testing.assert_allclose(out, [1 + rho * eps, 1 - rho * eps], atol=1e-15)

    def test_conditional_expectation_brute_force(self):
        # retain each coordinate with probability (1 + rho)/2
        rng = np.random.default_rng(2)
        rho = 0.37
        for n in (1, 2, 3, 4):
            vals = rng.normal(size=1 << n)
            got = walsh_synthesize(noise_operator(walsh_analyze(vals), rho))
            pts = cube_points(n).astype(float)
            weights = np.prod(
                (1.0 + rho * pts[:, None, :] * pts[None, :, :]) / 2.0, axis=2
            )
            np.testing.assert_allclose(got, weights @ vals, atol=1e-13)

    def test_rho_bound(self):
        f = walsh_analyze([1.0, 2.0])
        with pytest.raises(ParameterError):
            noise_operator(f, 1.2)

    @settings(max_examples=50, deadline=None)
    @given(
        st.floats(-1, 1, allow_nan=False),
        st.floats(-1, 1, allow_nan=False),
        st.integers(0, 2**31 - 1),
    )
    def test_semigroup_law_exact(self, rho, sig, seed):
        rng = np.random.default_rng(seed)
        f = walsh_analyze(rng.normal(size=8))
        once = noise_operator(f, rho * sig).coeffs
        twice = noise_operator(noise_operator(f, rho), sig).coeffs
        np.testing.assert_allclose(once, twice, atol=1e-15)


class TestCriticalRho:
    def test_forward_value(self):
        assert critical_rho(2, 4) == pytest.approx(math.sqrt(1 / 3))
        assert critical_rho(2, 4) == pytest.approx(0.57735, abs=1e-5)

    def test_reverse_value(self):
        assert critical_rho(0.5, 0.25) == pytest.approx(math.sqrt(2 / 3))

    def test_matches_critical_time(self):
        for p, q in ((2, 4), (1.5, 3), (0.5, 0.25), (-1, -2), (0.5, -1)):
            assert critical_rho(p, q) == pytest.approx(
                math.exp(-critical_time(p, q, 1.0)), abs=1e-14
            )

    def test_degenerate_limit(self):
        assert critical_rho(2.0, 2.0 + 1e-9) == pytest.approx(1.0, abs=1e-9)

    def test_rejection(self):
        with pytest.raises(ParameterError):
            critical_rho(4, 2)
        with pytest.raises(ParameterError):
            critical_rho(1.0, 2.0)


class TestBooleanHyperCheck:
    def test_constant_ratio_one(self):
        f = walsh_analyze([1.0, 1.0])
        for p, q, rho in ((2, 4, 0.5), (0.5, 0.25, 0.8), (2, 10, 0.3)):
            rep = boolean_hyper_check(f, p, q, rho)
            assert rep.ratio == pytest.approx(1.0, abs=1e-14)
            assert rep.passed

    def test_two_point_forward_at_critical(self):
        f = walsh_analyze([1.3, 0.7])  # 1 + 0.3 x
        rep = boolean_hyper_check(f, 2, 4, critical_rho(2, 4))
        assert rep.mode == "forward"
        assert rep.ratio <= 1.0
        # closed form: ||1 + d x||_q = ((1+d)^q + (1-d)^q)/2)^{1/q}
        d = 0.3 * critical_rho(2, 4)
        want = (((1 + d) ** 4 + (1 - d) ** 4) / 2) ** 0.25 / math.sqrt(1 + 0.09)
        assert rep.ratio == pytest.approx(want, rel=1e-13)

    def test_two_point_fails_above_critical(self):
        rho = 1.05 * critical_rho(2, 4)
        eps = np.linspace(0.01, 0.99, 99)
        ratios = [
            boolean_hyper_check(walsh_analyze([1 + e, 1 - e]), 2, 4, rho).ratio
            for e in eps
        ]
        assert max(ratios) > 1.0

    def test_reverse_random_positive(self):
        rng = np.random.default_rng(4)
        rho_c = critical_rho(0.5, 0.25)
        for n in (1, 2, 3):
            for _ in range(200):
                vals = rng.uniform(0.1, 3.0, size=1 << n)
                rep = boolean_hyper_check(walsh_analyze(vals), 0.5, 0.25, rho_c)
                assert rep.mode == "reverse"
                assert rep.ratio >= 1.0 - 1e-12

    def test_geometric_mean_convention(self):
        # p = 0 sits in the reverse range q < p < 1
        rng = np.random.default_rng(5)
        rho_c = critical_rho(0.0, -1.0)
        for _ in range(50):
            vals = rng.uniform(0.2, 2.0, size=4)
            rep = boolean_hyper_check(walsh_analyze(vals), 0.0, -1.0, rho_c)
            assert rep.ratio >= 1.0 - 1e-12

    def test_positivity_required(self):
        f = walsh_analyze([1.0, -0.5])
        with pytest.raises(DomainError):
            boolean_hyper_check(f, 0.5, 0.25, 0.5)

    def test_inadmissible_pair(self):
        f = walsh_analyze([1.0, 1.0])
        with pytest.raises(ParameterError):
            boolean_hyper_check(f, 4, 2, 0.5)


class TestSharpness:
    @pytest.mark.parametrize("p,q", [(2.0, 4.0), (1.5, 3.0), (2.0, 10.0)])
    def test_forward_sharp_at_critical(self, p, q):
        rho_c = critical_rho(p, q)
        eps = np.linspace(0.01, 0.99, 99)
        at = [
            boolean_hyper_check(walsh_analyze([1 + e, 1 - e]), p, q, rho_c).ratio
            for e in eps
        ]
        assert max(at) <= 1.0 + 1e-12
        above = min(1.0, 1.02 * rho_c)
        over = [
            boolean_hyper_check(walsh_analyze([1 + e, 1 - e]), p, q, above).ratio
            for e in eps
        ]
        assert max(over) > 1.0 + 1e-12


class TestTensorization:
    def test_norms_multiply(self):
        f1 = walsh_analyze([1.3, 0.7])
        rho_c = critical_rho(2, 4)
        r1 = boolean_hyper_check(f1, 2, 4, rho_c).ratio
        for n in range(2, 7):
            fn = tensor_power(f1, n)
            rep = boolean_hyper_check(fn, 2, 4, rho_c)
            assert rep.passed
            assert rep.ratio == pytest.approx(r1**n, abs=1e-12)

    def test_dimension_cap(self):
        f = walsh_analyze([1.3, 0.7])
        with pytest.raises(ParameterError):
            tensor_power(f, 13)
