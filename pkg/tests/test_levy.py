import numpy as np
import pytest

from levyou import (
    DomainError,
    DrivingKind,
    LevyParams,
    derive_stream,
    increment_params,
    sample_increment_sequence,
)
from levyou.levy import (
    GammaIncrement,
    InverseGaussianIncrement,
    MixedIncrement,
    NormalIncrement,
)

from conftest import sample_standard_error_of_variance, two_sample_ks_pvalue

ALL_KINDS = list(DrivingKind)


class TestLevyParams:
    def test_eta2_must_be_positive(self):
        with pytest.raises(DomainError):
            LevyParams(1.0, 0.0)
        with pytest.raises(DomainError):
            LevyParams(1.0, -1.0)

    def test_negative_mu_fine_for_brownian(self):
        p = LevyParams(-2.0, 1.0)
        spec = increment_params(DrivingKind.BROWNIAN, p, 1.0)
        assert spec.mean == -2.0


class TestIncrementParams:
    def test_gamma_unit_rates(self):
        spec = increment_params(DrivingKind.GAMMA, LevyParams(1.0, 1.0), 1.0)
        assert spec == GammaIncrement(shape=1.0, scale=1.0)

    def test_inverse_gaussian_unit_rates(self):
        spec = increment_params(DrivingKind.INVERSE_GAUSSIAN, LevyParams(1.0, 1.0), 1.0)
        assert spec == InverseGaussianIncrement(mean=1.0, shape=1.0)

    def test_brownian_scaling(self):
        spec = increment_params(DrivingKind.BROWNIAN, LevyParams(0.0, 1.0), 0.25)
        assert spec == NormalIncrement(mean=0.0, variance=0.25)

    @pytest.mark.parametrize("kind", ALL_KINDS)
    @pytest.mark.parametrize("dt", [1.0, 0.1, 0.001])
    def test_moment_identities(self, kind, dt):
        mu, eta2 = 1.3, 0.7
        spec = increment_params(kind, LevyParams(mu, eta2), dt)
        if isinstance(spec, NormalIncrement):
            mean, var = spec.mean, spec.variance
        elif isinstance(spec, GammaIncrement):
            mean, var = spec.shape * spec.scale, spec.shape * spec.scale**2
        elif isinstance(spec, InverseGaussianIncrement):
            mean, var = spec.mean, spec.mean**3 / spec.shape
        else:
            g, ig = spec.gamma, spec.inverse_gaussian
            mean = g.shape * g.scale + ig.mean
            var = g.shape * g.scale**2 + ig.mean**3 / ig.shape
        assert mean == pytest.approx(mu * dt, rel=1e-12)
        assert var == pytest.approx(eta2 * dt, rel=1e-12)

    def test_mixed_weight_split(self):
        spec = increment_params(DrivingKind.MIXED, LevyParams(1.0, 1.0), 1.0, weight=0.25)
        assert isinstance(spec, MixedIncrement)
        assert spec.gamma.shape * spec.gamma.scale == pytest.approx(0.25)
        assert spec.inverse_gaussian.mean == pytest.approx(0.75)

    def test_mixed_weight_domain(self):
        for w in (0.0, 1.0, -0.5):
            with pytest.raises(DomainError):
                increment_params(DrivingKind.MIXED, LevyParams(1.0, 1.0), 1.0, weight=w)

    @pytest.mark.parametrize(
        "kind", [DrivingKind.GAMMA, DrivingKind.INVERSE_GAUSSIAN, DrivingKind.MIXED]
    )
    def test_subordinators_need_positive_mu(self, kind):
        with pytest.raises(DomainError):
            increment_params(kind, LevyParams(0.0, 1.0), 1.0)
        with pytest.raises(DomainError):
            increment_params(kind, LevyParams(-1.0, 1.0), 1.0)

    def test_dt_domain(self):
        with pytest.raises(DomainError):
            increment_params(DrivingKind.GAMMA, LevyParams(1.0, 1.0), 0.0)


class TestSampleIncrementSequence:
    @pytest.mark.parametrize("kind", ALL_KINDS)
    @pytest.mark.parametrize("dt", [1.0, 0.1, 0.001])
    def test_moment_matching(self, kind, dt):
        params = LevyParams(1.0, 1.0)
        x = sample_increment_sequence(kind, params, dt, 100_000, derive_stream(21, 0))
        n = len(x)
        assert abs(x.mean() - params.mu * dt) < 5 * x.std() / np.sqrt(n)
        var_se = sample_standard_error_of_variance(x)
        assert abs(x.var() - params.eta2 * dt) < 5 * var_se

    @pytest.mark.parametrize(
        "kind", [DrivingKind.GAMMA, DrivingKind.INVERSE_GAUSSIAN, DrivingKind.MIXED]
    )
    def test_subordinator_draws_strictly_positive(self, kind):
        # dt small enough that the gamma sub-increment shape is far below 1.
        x = sample_increment_sequence(kind, LevyParams(1.0, 1.0), 0.001, 100_000, derive_stream(22, 0))
        assert np.all(x > 0.0)

    def test_mixed_variance_additivity(self):
        x = sample_increment_sequence(
            DrivingKind.MIXED, LevyParams(1.0, 1.0), 1.0, 1_000_000, derive_stream(23, 0)
        )
        var_se = sample_standard_error_of_variance(x)
        assert abs(x.var() - 1.0) < 3 * var_se

    @pytest.mark.parametrize(
        "kind", [DrivingKind.GAMMA, DrivingKind.INVERSE_GAUSSIAN, DrivingKind.BROWNIAN]
    )
    def test_infinitely_divisible_across_step_sizes(self, kind):
        # Sum of 4 increments over dt/4 must match one increment over dt.
        params = LevyParams(1.0, 1.0)
        dt, k, n = 1.0, 4, 10_000
        whole = sample_increment_sequence(kind, params, dt, n, derive_stream(24, 0))
        parts = sample_increment_sequence(kind, params, dt / k, n * k, derive_stream(24, 1))
        summed = parts.reshape(n, k).sum(axis=1)
        assert two_sample_ks_pvalue(whole, summed) > 0.01

    def test_count_domain(self):
        with pytest.raises(DomainError):
            sample_increment_sequence(
                DrivingKind.GAMMA, LevyParams(1.0, 1.0), 1.0, 0, derive_stream(25, 0)
            )
