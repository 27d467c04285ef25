"""Goodness-of-fit tests for the driving-process family.

Two bootstrap procedures decide whether the recovered increments are
consistent with a hypothesized family:

* Procedure 1 (Brownian motion only).  Draw one with-replacement resample
  of the increments, take its mean and standard deviation, and apply the
  Kolmogorov-Smirnov test for normality with those parameters.  Using
  resampled parameters rather than the sample's own decouples estimation
  from the test enough for the plain asymptotic KS p-value to apply.  By
  default the KS distance is computed on the original increments; the
  ``ks_on_resample`` switch tests the resample itself instead, since the
  recipe is usable either way.

* Procedure 2 (Normal / Gamma / inverse Gaussian).  Fit the family by
  method of moments, evaluate the fitted CDF at every increment, sort, and
  form

      D_N = sqrt(N) * max_i max(i/N - Z_(i), Z_(i) - (i-1)/N).

  Then draw ``bootstrap_count`` parametric resamples from the fitted law,
  refit and recompute D on each, and reject when the data statistic
  exceeds the 95th percentile (nearest rank) of the bootstrap statistics.

Method-of-moments fits map the sample mean m and variance s2 (divisor N)
to: Normal(m, sqrt(s2)); Gamma(shape m^2/s2, scale s2/m); inverse
Gaussian(mean m, shape m^3/s2).  For the positive families the CDF is 0 at
x <= 0, so negative increments push their Z values onto 0 and inflate D_N;
that is the intended misfit signal, not an error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSampleError, DomainError, FitError
from .recovery import IncrementSeries
from .special import (
    ks_pvalue,
    log_std_normal_cdf,
    regularized_lower_gamma,
    std_normal_cdf,
)

NORMAL = "normal"
GAMMA = "gamma"
INVERSE_GAUSSIAN = "ig"
FAMILIES = (NORMAL, GAMMA, INVERSE_GAUSSIAN)


@dataclass(frozen=True)
class FamilyFit:
    """A family name and its moment-fitted parameter tuple."""

    family: str
    theta: tuple[float, ...]


@dataclass(frozen=True)
class GofResult:
    """Outcome of a goodness-of-fit procedure."""

    procedure: int
    family: str
    statistic: float
    reject: bool
    p_value: float | None = None
    critical_95: float | None = None
    bootstrap_count: int = 0


def _values(incr) -> np.ndarray:
    if isinstance(incr, IncrementSeries):
        return incr.values
    return np.asarray(incr, dtype=float)


def fit_moments(incr, family: str) -> FamilyFit:
    """Fit the named family to the increments by method of moments."""
    x = _values(incr)
    if len(x) < 2:
        raise DomainError("at least two increments are required for a fit")
    if family not in FAMILIES:
        raise DomainError(f"unknown family {family!r}; expected one of {FAMILIES}")
    m = float(x.mean())
    s2 = float(x.var())
    if s2 <= 0.0:
        raise FitError("zero sample variance: nothing to fit")
    if family == NORMAL:
        return FamilyFit(NORMAL, (m, math.sqrt(s2)))
    if m <= 0.0:
        raise FitError(f"{family} fit requires a positive sample mean, got {m:.6g}")
    if family == GAMMA:
        return FamilyFit(GAMMA, (m * m / s2, s2 / m))
    return FamilyFit(INVERSE_GAUSSIAN, (m, m**3 / s2))


def _ig_cdf(x: np.ndarray, mean: float, shape: float) -> np.ndarray:
    """Inverse Gaussian CDF, overflow-safe in the exp(2 shape / mean) term."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0.0
    if pos.any():
        xp = x[pos]
        root = np.sqrt(shape / xp)
        first = std_normal_cdf(root * (xp / mean - 1.0))
        # exp(2*shape/mean) * Phi(-z) assembled in log space; the product is
        # bounded by 1 even when either factor alone would overflow/underflow.
        log_second = 2.0 * shape / mean + log_std_normal_cdf(-root * (xp / mean + 1.0))
        out[pos] = first + np.exp(np.minimum(log_second, 0.0))
    return np.clip(out, 0.0, 1.0)


def family_cdf(fit: FamilyFit, x):
    """Evaluate the fitted family's CDF at x (scalar or array)."""
    scalar = np.isscalar(x)
    x_arr = np.asarray(x, dtype=float)
    if fit.family == NORMAL:
        m, s = fit.theta
        out = np.asarray(std_normal_cdf((x_arr - m) / s))
    elif fit.family == GAMMA:
        shape, scale = fit.theta
        out = np.zeros_like(x_arr)
        pos = x_arr > 0.0
        if pos.any():
            out[pos] = regularized_lower_gamma(shape, x_arr[pos] / scale)
    elif fit.family == INVERSE_GAUSSIAN:
        mean, shape = fit.theta
        out = _ig_cdf(x_arr, mean, shape)
    else:
        raise DomainError(f"unknown family {fit.family!r}")
    return float(out[()]) if scalar else out


def dn_statistic(z_sorted) -> float:
    """Scaled KS discrepancy of sorted CDF values against uniformity."""
    z = np.asarray(z_sorted, dtype=float)
    n = len(z)
    if n < 1:
        raise DomainError("at least one value is required")
    if np.any(np.diff(z) < 0.0):
        raise DomainError("input must be sorted ascending")
    if np.any(z < 0.0) or np.any(z > 1.0):
        raise DomainError("input values must lie in [0, 1]")
    i = np.arange(1, n + 1)
    d = np.maximum(i / n - z, z - (i - 1) / n).max()
    return float(math.sqrt(n) * d)


def _ks_distance(x: np.ndarray, cdf_values: np.ndarray) -> float:
    """Classical two-sided KS sup distance of a sample against a CDF."""
    order = np.argsort(x, kind="stable")
    f = cdf_values[order]
    n = len(x)
    i = np.arange(1, n + 1)
    return float(max((i / n - f).max(), (f - (i - 1) / n).max()))


def procedure1_bm_test(
    incr,
    stream: np.random.Generator,
    alpha: float = 0.05,
    ks_on_resample: bool = False,
) -> GofResult:
    """Bootstrap-parameter KS test for Brownian driving noise."""
    x = _values(incr)
    n = len(x)
    if n < 2:
        raise DomainError("at least two increments are required")
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must lie in (0, 1)")
    resample = x[stream.integers(0, n, n)]
    if resample.var() == 0.0:
        # One fresh retry before giving up on a degenerate resample.
        resample = x[stream.integers(0, n, n)]
        if resample.var() == 0.0:
            raise DegenerateSampleError("degenerate resample: zero standard deviation twice")
    m = float(resample.mean())
    s = float(math.sqrt(resample.var()))
    target = resample if ks_on_resample else x
    d = _ks_distance(target, np.asarray(std_normal_cdf((target - m) / s)))
    p = ks_pvalue(d, len(target))
    return GofResult(
        procedure=1,
        family=NORMAL,
        statistic=d,
        reject=p < alpha,
        p_value=p,
        bootstrap_count=1,
    )


# --- vectorized internals for the parametric bootstrap -----------------------


def _fit_rows(family: str, samples: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Rowwise moment fit; returns (theta1, theta2, valid_mask)."""
    m = samples.mean(axis=1)
    s2 = samples.var(axis=1)
    valid = s2 > 0.0
    if family != NORMAL:
        valid &= m > 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        if family == NORMAL:
            return m, np.sqrt(s2), valid
        if family == GAMMA:
            return m * m / s2, s2 / m, valid
        return m, m**3 / s2, valid


def _cdf_rows(family: str, t1: np.ndarray, t2: np.ndarray, x: np.ndarray) -> np.ndarray:
    t1 = t1[:, None]
    t2 = t2[:, None]
    if family == NORMAL:
        return np.asarray(std_normal_cdf((x - t1) / t2))
    if family == GAMMA:
        u = np.maximum(x, 0.0) / t2
        out = np.asarray(regularized_lower_gamma(np.broadcast_to(t1, x.shape), u))
        out[x <= 0.0] = 0.0
        return out
    # Inverse Gaussian with per-row (mean, shape).
    out = np.zeros_like(x)
    pos = x > 0.0
    mean = np.broadcast_to(t1, x.shape)
    shape = np.broadcast_to(t2, x.shape)
    xp, mp, sp = x[pos], mean[pos], shape[pos]
    root = np.sqrt(sp / xp)
    first = np.asarray(std_normal_cdf(root * (xp / mp - 1.0)))
    log_second = 2.0 * sp / mp + np.asarray(log_std_normal_cdf(-root * (xp / mp + 1.0)))
    out[pos] = first + np.exp(np.minimum(log_second, 0.0))
    return np.clip(out, 0.0, 1.0)


def _draw_rows(
    family: str, fit: FamilyFit, rows: int, n: int, stream: np.random.Generator
) -> np.ndarray:
    t1, t2 = fit.theta
    if family == NORMAL:
        return stream.normal(t1, t2, (rows, n))
    if family == GAMMA:
        return stream.gamma(t1, t2, (rows, n))
    return stream.wald(t1, t2, (rows, n))


def _dn_rows(z_sorted: np.ndarray) -> np.ndarray:
    n = z_sorted.shape[1]
    i = np.arange(1, n + 1)
    d = np.maximum(i / n - z_sorted, z_sorted - (i - 1) / n).max(axis=1)
    return np.sqrt(n) * d


def procedure2_gof_test(
    incr,
    family: str,
    stream: np.random.Generator,
    bootstrap_count: int = 1000,
) -> GofResult:
    """Parametric-bootstrap D_N test against the named family."""
    x = _values(incr)
    if bootstrap_count < 1:
        raise DomainError("bootstrap_count must be at least 1")
    fit = fit_moments(x, family)
    z = np.sort(family_cdf(fit, x))
    d_obs = dn_statistic(z)

    n = len(x)
    samples = _draw_rows(family, fit, bootstrap_count, n, stream)
    t1, t2, valid = _fit_rows(family, samples)
    attempts = bootstrap_count
    max_attempts = 10 * bootstrap_count
    while not valid.all():
        bad = np.flatnonzero(~valid)
        if attempts + len(bad) > max_attempts:
            raise FitError(
                f"bootstrap refit kept failing after {attempts} attempts for family {family!r}"
            )
        attempts += len(bad)
        redraw = _draw_rows(family, fit, len(bad), n, stream)
        samples[bad] = redraw
        rt1, rt2, rvalid = _fit_rows(family, redraw)
        t1[bad], t2[bad], valid[bad] = rt1, rt2, rvalid

    z_boot = np.sort(_cdf_rows(family, t1, t2, samples), axis=1)
    d_boot = np.sort(_dn_rows(z_boot))
    critical = float(d_boot[math.ceil(0.95 * bootstrap_count) - 1])
    return GofResult(
        procedure=2,
        family=family,
        statistic=d_obs,
        reject=d_obs > critical,
        critical_95=critical,
        bootstrap_count=bootstrap_count,
    )
