import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from priorsize.asymptotics import (
    AsymptoticParams,
    asymptotic_r,
    lemma1_constants,
    normal_analytic_curves,
    normal_analytic_u,
    normal_exact_m,
    prior_size_factor,
    super_info_factor,
)
from priorsize.errors import DomainError, SingularDenominator


def root_by_bisection(k, gamma, delta_sq):
    """M solving 2/(k+M) = u_prior(k) directly on the closed-form curves."""
    target = normal_analytic_u(k, gamma, delta_sq)[0]
    return brentq(lambda m: 2 / (k + m) - target, -k + 1e-12, 1e6, xtol=1e-13)


class TestAsymptoticR:
    def test_honest_prior(self):
        assert asymptotic_r(AsymptoticParams(20 / 24, 1.0)) == pytest.approx(0.2)
        assert asymptotic_r(AsymptoticParams(20 / 24, 1.0, c=0.9)) == pytest.approx(0.2)

    def test_lower_limit(self):
        assert asymptotic_r(AsymptoticParams(20 / 24, 1e9)) == pytest.approx(-1, abs=1e-6)

    def test_super_information(self):
        p = AsymptoticParams.from_sizes(4, 20, 0.0)
        assert asymptotic_r(p) * 20 == pytest.approx(68 / 11)

    def test_domain(self):
        with pytest.raises(DomainError):
            AsymptoticParams(0.0, 1.0)
        with pytest.raises(DomainError):
            AsymptoticParams(0.5, -1.0)
        with pytest.raises(DomainError):
            AsymptoticParams(0.5, 1.0, m=4, k=20)
        with pytest.raises(SingularDenominator):
            prior_size_factor(0.0, 0.0, c=1.0)

    def test_decreasing_and_bounded(self):
        for r in np.linspace(0.05, 0.95, 10):
            vals = [asymptotic_r(AsymptoticParams(r, d)) for d in np.linspace(0, 200, 400)]
            assert np.all(np.diff(vals) < 0)
            assert min(vals) > -1

    @given(st.floats(0.01, 1e3), st.floats(0.01, 1e3), st.floats(0.01, 1.0))
    def test_honest_prior_gives_nominal_size(self, m, k, c):
        p = AsymptoticParams.from_sizes(m, k, 1.0, c)
        assert asymptotic_r(p) * k == pytest.approx(m, rel=1e-9)


class TestSuperInformation:
    def test_examples(self):
        assert super_info_factor(1e-12) == pytest.approx(2)
        assert super_info_factor(1.0) == 1.5
        assert super_info_factor(20 / 24) == pytest.approx(17 / 11)
        assert super_info_factor(20 / 24) * 4 == pytest.approx(asymptotic_r(
            AsymptoticParams.from_sizes(4, 20, 0.0)) * 20)

    def test_band(self):
        for r in np.linspace(1e-3, 1, 1000):
            assert 1.5 <= super_info_factor(r) <= 2

    def test_prior_size_factor(self):
        assert prior_size_factor(0.5, 0.0) == pytest.approx(5 / 3)
        assert prior_size_factor(0.5, 1.0) == 1
        for r in np.linspace(0.01, 0.99, 20):
            assert prior_size_factor(r, 0.0) == pytest.approx(super_info_factor(r))


class TestLeadingConstants:
    def test_examples(self):
        a, b = lemma1_constants(AsymptoticParams(5 / 6, 1.0), 1.0, 1.0, 1.0)
        assert (a, b) == (pytest.approx(5 / 3), 2)
        a, b = lemma1_constants(AsymptoticParams(1 - 1e-15, 7.0), 1.3, 0.4, 2.0)
        assert a == pytest.approx(b)

    @given(st.floats(0.01, 0.99), st.floats(0, 50), st.floats(0.01, 0.99))
    @settings(max_examples=300)
    def test_ratio_is_theorem(self, r, d2, c):
        try:
            p = AsymptoticParams(r, d2, c)
            expected = asymptotic_r(p)
        except SingularDenominator:
            return
        a, b = lemma1_constants(p, 1.0, 1 - c, c)
        assert b / a - 1 == pytest.approx(expected, rel=1e-10, abs=1e-10)


class TestNormal:
    def test_examples(self):
        assert normal_exact_m(20, 4, 1) == pytest.approx(4)
        assert normal_exact_m(20, 4, 0) == pytest.approx(68 / 11)
        assert normal_exact_m(20, 4, 1e6) == pytest.approx(-20, abs=1e-3)

    def test_analytic_u(self):
        assert normal_analytic_u(7, 0, 3) == (pytest.approx(2 / 7), pytest.approx(2 / 7))
        assert normal_analytic_u(20, 4, 1)[0] == pytest.approx(1 / 12)

    @pytest.mark.parametrize("gamma", [0.5, 4, 25])
    @pytest.mark.parametrize("d2", [0, 1, 4, 100])
    def test_root_matches_direct_solve(self, gamma, d2):
        for k in (1, 5, 20, 50):
            assert normal_exact_m(k, gamma, d2) == pytest.approx(
                root_by_bisection(k, gamma, d2), abs=1e-8)

    @given(st.floats(0.1, 100), st.floats(0.01, 100), st.floats(0, 100))
    def test_special_case_of_theorem(self, k, gamma, d2):
        r = k / (gamma + k)
        if r >= 1:
            return
        expected = asymptotic_r(AsymptoticParams(r, d2, 0.5))
        assert normal_exact_m(k, gamma, d2) / k - expected == pytest.approx(0, abs=1e-12)

    def test_curves_accept_arrays(self):
        prior, base = normal_analytic_curves(4, 1)
        ks = np.array([1.0, 2.0, 20.0])
        np.testing.assert_allclose(prior.fn(ks), [normal_analytic_u(k, 4, 1)[0] for k in ks])
        np.testing.assert_allclose(base.fn(ks), 2 / ks)
