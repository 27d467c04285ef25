"""Uncorrelatedness test for the recovered driving increments.

If the driving process has independent increments, the recovered
unit-interval increments are asymptotically uncorrelated and the statistic

    W(k) = sqrt(N) * gamma_hat(k) / eta2_hat

is asymptotically standard normal (N large, N/M small), where eta2_hat is
the sample variance with divisor N and gamma_hat(k) the lag-k sample
autocovariance with divisor N - k, both centered at the full-sample mean.
The null of uncorrelated increments is rejected when |W| exceeds the
two-sided normal critical value at the chosen level.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSampleError, DomainError
from .recovery import IncrementSeries
from .special import std_normal_quantile


@dataclass(frozen=True)
class WhitenessResult:
    """Outcome of the lag-k uncorrelatedness test."""

    w_stat: float
    lag: int
    n: int
    eta2_hat: float
    gamma_hat: float
    alpha: float
    critical: float
    reject: bool


def _values(incr) -> np.ndarray:
    if isinstance(incr, IncrementSeries):
        return incr.values
    return np.asarray(incr, dtype=float)


def sample_moments(incr) -> tuple[float, float]:
    """Sample mean and variance (divisor N) of the increment series."""
    x = _values(incr)
    if len(x) < 2:
        raise DomainError("at least two increments are required")
    mean = float(x.mean())
    eta2 = float(((x - mean) ** 2).mean())
    return mean, eta2


def sample_autocov(incr, k: int) -> float:
    """Lag-k sample autocovariance with divisor N - k, full-sample mean."""
    x = _values(incr)
    n = len(x)
    if not 1 <= k <= n - 1:
        raise DomainError(f"lag must lie in [1, {n - 1}], got {k}")
    c = x - x.mean()
    return float((c[k:] * c[:-k]).sum() / (n - k))


def w_statistic(incr, lag: int = 1, alpha: float = 0.05) -> WhitenessResult:
    """Compute W(lag) and the accept/reject decision at the given level."""
    x = _values(incr)
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must lie in (0, 1)")
    _, eta2 = sample_moments(x)
    if eta2 == 0.0:
        raise DegenerateSampleError("constant increments carry no information")
    gamma = sample_autocov(x, lag)
    n = len(x)
    w = float(np.sqrt(n) * gamma / eta2)
    critical = std_normal_quantile(1.0 - alpha / 2.0)
    return WhitenessResult(
        w_stat=w,
        lag=lag,
        n=n,
        eta2_hat=eta2,
        gamma_hat=gamma,
        alpha=alpha,
        critical=critical,
        reject=abs(w) > critical,
    )


def acf(incr, max_lag: int) -> np.ndarray:
    """Sample autocorrelations for lags 0 .. max_lag (lag 0 is 1 exactly).

    The lag-k value is gamma_hat(k) / eta2_hat; because the numerator uses
    divisor N - k it can overshoot [-1, 1] by a small numerical margin.
    """
    x = _values(incr)
    n = len(x)
    if not 0 <= max_lag <= n - 1:
        raise DomainError(f"max_lag must lie in [0, {n - 1}], got {max_lag}")
    _, eta2 = sample_moments(x)
    if eta2 == 0.0:
        raise DegenerateSampleError("constant increments carry no information")
    out = np.empty(max_lag + 1)
    out[0] = 1.0
    for k in range(1, max_lag + 1):
        out[k] = sample_autocov(x, k) / eta2
    return out
