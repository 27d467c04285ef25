import numpy as np
import pytest

from levyou import (
    Car1Params,
    DrivingKind,
    LevyParams,
    Path,
    SamplingGrid,
    derive_stream,
    simulate_path,
)


def correlated_increment_path(seed=5, n=80, m=50):
    """A path with a slow periodic component: the recovered increments are
    smooth and strongly autocorrelated, so the uncorrelatedness test must
    reject (W is near 7.7 for any seed)."""
    rng = derive_stream(seed, 0)
    t = np.arange(n * m + 1) / m
    values = np.sin(2.0 * np.pi * t / 20.0) + 2.0 + 0.05 * rng.normal(size=len(t))
    return Path(SamplingGrid(n, m), values)


@pytest.fixture
def stream():
    return derive_stream(20250810, 0)


@pytest.fixture
def small_grid():
    return SamplingGrid(n_periods=50, per_period=50)


@pytest.fixture
def gamma_path(small_grid):
    """A gamma-driven path small enough for fast unit tests."""
    return simulate_path(
        Car1Params(a=2.0),
        DrivingKind.GAMMA,
        LevyParams(1.0, 1.0),
        small_grid,
        derive_stream(99, 0),
        substeps=5,
    )


@pytest.fixture
def bm_path(small_grid):
    return simulate_path(
        Car1Params(a=2.0),
        DrivingKind.BROWNIAN,
        LevyParams(1.0, 1.0),
        small_grid,
        derive_stream(99, 1),
        exact_bm=True,
    )


def two_sample_ks_pvalue(x, y):
    """Independent two-sample KS oracle used by distribution-agreement tests."""
    from scipy.stats import ks_2samp

    return ks_2samp(x, y).pvalue


def sample_standard_error_of_variance(x):
    """Plug-in standard error of the sample variance."""
    x = np.asarray(x)
    n = len(x)
    c = x - x.mean()
    m2 = (c**2).mean()
    m4 = (c**4).mean()
    return np.sqrt(max(m4 - m2 * m2, 0.0) / n)
