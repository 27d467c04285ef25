import math

import numpy as np
import pytest
import scipy.special
import scipy.stats

from levyou import (
    DomainError,
    ks_pvalue,
    log_std_normal_cdf,
    regularized_lower_gamma,
    std_normal_cdf,
    std_normal_quantile,
)

# Reference values computed with mpmath at 25+ significant digits.
NORMAL_CDF_TABLE = [
    (-8.0, 6.220960574271784e-16),
    (-6.0, 9.865876450376981e-10),
    (-3.5, 2.326290790355250e-4),
    (-1.0, 0.15865525393145705),
    (-0.3, 0.3820885778110474),
    (0.0, 0.5),
    (0.5, 0.6914624612740131),
    (1.2, 0.8849303297782917),
    (1.96, 0.9750021048517796),
    (2.5, 0.9937903346742239),
    (4.0, 0.9999683287581669),
    (6.5, 0.9999999999598400),
]

GAMMA_P_TABLE = [
    (0.3, 0.2, 0.6575067242697217),
    (1.0, 2.5, 0.9179150013761012),
    (2.7, 1.1, 0.1427623289324442),
    (5.0, 9.3, 0.9543525360490060),
    (12.0, 4.0, 9.152291472700630e-4),
    (0.05, 0.7, 0.9806207733808330),
    (40.0, 45.0, 0.7916181799674072),
]


class TestNormalCdf:
    @pytest.mark.parametrize("x,expected", NORMAL_CDF_TABLE)
    def test_reference_values(self, x, expected):
        got = std_normal_cdf(x)
        assert got == pytest.approx(expected, rel=1e-12, abs=1e-15)

    def test_zero_is_half(self):
        assert std_normal_cdf(0.0) == 0.5

    def test_symmetry(self):
        xs = np.linspace(-10, 10, 401)
        total = np.asarray(std_normal_cdf(xs)) + np.asarray(std_normal_cdf(-xs))
        assert np.max(np.abs(total - 1.0)) < 1e-12

    def test_monotone(self):
        xs = np.linspace(-12, 12, 2001)
        vals = np.asarray(std_normal_cdf(xs))
        assert np.all(np.diff(vals) >= 0.0)

    def test_matches_scipy_on_grid(self):
        xs = np.linspace(-9, 9, 301)
        assert np.allclose(std_normal_cdf(xs), scipy.stats.norm.cdf(xs), atol=1e-13)

    def test_nonfinite_rejected(self):
        for bad in (np.nan, np.inf, -np.inf):
            with pytest.raises(DomainError):
                std_normal_cdf(bad)


class TestLogNormalCdf:
    def test_moderate_matches_log_of_cdf(self):
        xs = np.linspace(-30, 5, 101)
        assert np.allclose(log_std_normal_cdf(xs), np.log(std_normal_cdf(xs)), rtol=1e-12)

    def test_deep_tail(self):
        # mpmath: log(ncdf(-40)) and log(ncdf(-50))
        assert log_std_normal_cdf(-40.0) == pytest.approx(-804.6084420137537881, rel=1e-12)
        assert log_std_normal_cdf(-10.0) == pytest.approx(-53.231285150512470, rel=1e-12)


class TestNormalQuantile:
    def test_median(self):
        assert abs(std_normal_quantile(0.5)) < 1e-12

    def test_two_sided_critical_value(self):
        assert std_normal_quantile(0.975) == pytest.approx(1.959963984540054, abs=1e-9)
        assert std_normal_quantile(0.025) == pytest.approx(-1.959963984540054, abs=1e-9)

    def test_roundtrip_with_cdf(self):
        for x in np.linspace(-6, 6, 61):
            assert std_normal_quantile(std_normal_cdf(x)) == pytest.approx(x, abs=1e-8)

    def test_cdf_of_quantile_close(self):
        for p in (1e-8, 1e-4, 0.2, 0.7, 0.99, 1 - 1e-9):
            assert std_normal_cdf(std_normal_quantile(p)) == pytest.approx(p, abs=1e-10)

    def test_domain(self):
        for bad in (0.0, 1.0, -0.2, 1.3, np.nan):
            with pytest.raises(DomainError):
                std_normal_quantile(bad)


class TestRegularizedLowerGamma:
    @pytest.mark.parametrize("shape,x,expected", GAMMA_P_TABLE)
    def test_reference_values(self, shape, x, expected):
        assert regularized_lower_gamma(shape, x) == pytest.approx(expected, rel=1e-12)

    def test_exponential_closed_form(self):
        assert regularized_lower_gamma(1.0, math.log(2.0)) == pytest.approx(0.5, rel=1e-13)
        assert regularized_lower_gamma(2.0, 2.0) == pytest.approx(1.0 - 3.0 * math.exp(-2.0), rel=1e-13)

    def test_at_zero(self):
        for shape in (0.01, 0.5, 1.0, 7.0):
            assert regularized_lower_gamma(shape, 0.0) == 0.0

    def test_limit_one(self):
        assert regularized_lower_gamma(2.0, 800.0) == pytest.approx(1.0, abs=1e-14)

    def test_monotone_on_random_grids(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            shape = float(rng.uniform(0.02, 30.0))
            xs = np.sort(rng.uniform(0.0, 60.0, 200))
            vals = np.asarray(regularized_lower_gamma(shape, xs))
            assert np.all(np.diff(vals) >= -1e-15)

    def test_matches_scipy_on_random_grid(self):
        rng = np.random.default_rng(6)
        shapes = rng.uniform(0.05, 20.0, 300)
        xs = rng.uniform(0.0, 50.0, 300)
        ours = np.array([regularized_lower_gamma(s, x) for s, x in zip(shapes, xs)])
        theirs = scipy.special.gammainc(shapes, xs)
        assert np.allclose(ours, theirs, rtol=1e-10, atol=1e-14)

    def test_array_arguments(self):
        shapes = np.array([[0.5, 2.0], [1.0, 7.0]])
        xs = np.array([[0.3, 2.0], [1.0, 4.0]])
        vals = regularized_lower_gamma(shapes, xs)
        assert vals.shape == (2, 2)
        assert vals[0, 1] == pytest.approx(regularized_lower_gamma(2.0, 2.0), rel=1e-14)

    def test_domain(self):
        with pytest.raises(DomainError):
            regularized_lower_gamma(0.0, 1.0)
        with pytest.raises(DomainError):
            regularized_lower_gamma(-2.0, 1.0)
        with pytest.raises(DomainError):
            regularized_lower_gamma(1.0, -0.5)


class TestKsPvalue:
    def test_zero_distance(self):
        assert ks_pvalue(0.0, 10) == 1.0

    def test_classical_five_percent_point(self):
        # lam = 1.36; series value from mpmath: 0.0494858767553779.
        assert ks_pvalue(1.36 / math.sqrt(400), 400) == pytest.approx(0.0494858767553779, rel=1e-9)

    def test_matches_scipy_asymptotic(self):
        for lam in (0.5, 0.8, 1.0, 1.36, 2.0, 3.0):
            ours = ks_pvalue(lam / math.sqrt(900), 900)
            theirs = scipy.stats.kstwobign.sf(lam)
            assert ours == pytest.approx(theirs, rel=1e-8, abs=1e-12)

    def test_huge_distance(self):
        assert ks_pvalue(50.0, 100) <= 1e-12

    def test_nonincreasing_in_distance(self):
        # Monotone up to the documented 1e-12 series truncation.
        ds = np.linspace(0.0, 0.6, 200)
        vals = [ks_pvalue(float(d), 50) for d in ds]
        assert all(a >= b - 5e-12 for a, b in zip(vals, vals[1:]))

    def test_domain(self):
        with pytest.raises(DomainError):
            ks_pvalue(-0.1, 10)
        with pytest.raises(DomainError):
            ks_pvalue(0.1, 0)
