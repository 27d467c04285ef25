"""Stationary CAR(1) path simulation on a regular sampling grid.

The process solves dY = -a Y dt + sigma dL and is observed at times i / M
for i = 0 .. N * M.  The simulator advances on a fine step
delta = 1 / (M * K) with the exact-decay recursion

    Y_next = exp(-a * delta) * Y + sigma * dL,

placing each whole sub-step driving increment at the step end (the
integrand-decay error is O(delta)), and records every K-th fine point.
By default the path starts at the stationary mean mu * sigma / a and runs
a burn-in of max(10 / a, 10) time units before recording, which leaves a
relative stationarity error below exp(-10).

For Brownian driving noise an exact mode is available: the sampled process
is an AR(1) with multiplier phi = exp(-a / M) whose innovations are
Normal((mu sigma / a)(1 - phi), (1 - phi^2) sigma^2 eta2 / (2a)), and the
start value is drawn from the exact stationary law, so no sub-stepping or
burn-in is needed.

Note sigma and eta are not separately identifiable from a sampled path
(rescaling L absorbs sigma); sigma is carried through for completeness and
defaults to 1 everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import lfilter

from .errors import DomainError
from .levy import DrivingKind, LevyParams, sample_increment_sequence


@dataclass(frozen=True)
class Car1Params:
    """Mean-reversion rate a and scale sigma of the SDE."""

    a: float
    sigma: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.a) and self.a > 0.0):
            raise DomainError("mean-reversion rate a must be a positive real")
        if not (np.isfinite(self.sigma) and self.sigma > 0.0):
            raise DomainError("sigma must be a positive real")


@dataclass(frozen=True)
class SamplingGrid:
    """N whole periods sampled M times per period: N * M + 1 points."""

    n_periods: int
    per_period: int

    def __post_init__(self):
        if self.n_periods < 1 or self.per_period < 1:
            raise DomainError("grid requires n_periods >= 1 and per_period >= 1")

    @property
    def total_points(self) -> int:
        return self.n_periods * self.per_period + 1

    def times(self) -> np.ndarray:
        return np.arange(self.total_points) / self.per_period


@dataclass(eq=False)
class Path:
    """Observed or simulated values Y at the grid times i / M."""

    grid: SamplingGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1 or len(self.values) != self.grid.total_points:
            raise DomainError(
                f"path needs exactly {self.grid.total_points} values, got {self.values.shape}"
            )
        if not np.all(np.isfinite(self.values)):
            raise DomainError("path values must all be finite")

    @property
    def times(self) -> np.ndarray:
        return self.grid.times()


@dataclass(frozen=True)
class StationaryMoments:
    """Stationary mean, variance and exponential autocovariance."""

    mean: float
    variance: float
    a: float

    def autocov(self, lag: float) -> float:
        return self.variance * math.exp(-self.a * lag)


def stationary_moments(car1: Car1Params, levy: LevyParams) -> StationaryMoments:
    """Stationary mean mu*sigma/a and variance sigma^2*eta2/(2a)."""
    mean = levy.mu * car1.sigma / car1.a
    var = car1.sigma**2 * levy.eta2 / (2.0 * car1.a)
    return StationaryMoments(mean=mean, variance=var, a=car1.a)


def _ar1(phi: float, innovations: np.ndarray, y0: float, gain: float = 1.0) -> np.ndarray:
    """y[k] = phi * y[k-1] + gain * innovations[k], seeded with y[-1] = y0."""
    out, _ = lfilter([gain], [1.0, -phi], innovations, zi=np.array([phi * y0]))
    return out


def simulate_path(
    car1: Car1Params,
    kind: DrivingKind,
    levy: LevyParams,
    grid: SamplingGrid,
    stream: np.random.Generator,
    substeps: int = 10,
    burn_in: float | None = None,
    initial: float | None = None,
    exact_bm: bool = False,
    mixed_weight: float = 0.5,
) -> Path:
    """Simulate one strictly stationary CAR(1) path on the grid.

    ``burn_in`` is in time units; it defaults to max(10 / a, 10) when the
    path starts from the stationary mean and to 0 when ``initial`` is
    given.  ``exact_bm`` selects the exact AR(1) mode (Brownian kind only).
    """
    if substeps < 1:
        raise DomainError("substeps must be at least 1")
    n, m = grid.n_periods, grid.per_period
    a, sigma = car1.a, car1.sigma

    if exact_bm:
        if kind is not DrivingKind.BROWNIAN:
            raise DomainError("exact mode is defined only for Brownian driving noise")
        stat = stationary_moments(car1, levy)
        phi = math.exp(-a / m)
        z_mean = stat.mean * (1.0 - phi)
        z_sd = math.sqrt((1.0 - phi * phi) * stat.variance)
        y0 = initial if initial is not None else stream.normal(stat.mean, math.sqrt(stat.variance))
        z = stream.normal(z_mean, z_sd, n * m)
        values = np.concatenate(([y0], _ar1(phi, z, y0)))
        return Path(grid, values)

    delta = 1.0 / (m * substeps)
    phi = math.exp(-a * delta)
    if initial is not None:
        y0 = float(initial)
        b = 0.0 if burn_in is None else burn_in
    else:
        y0 = levy.mu * sigma / a
        b = max(10.0 / a, 10.0) if burn_in is None else burn_in
    if b < 0.0:
        raise DomainError("burn_in must be nonnegative")
    n_burn = math.ceil(b * m * substeps)
    n_rec = n * m * substeps
    dl = sample_increment_sequence(kind, levy, delta, n_burn + n_rec, stream, mixed_weight)
    fine = _ar1(phi, dl, y0, gain=sigma)
    if n_burn > 0:
        values = fine[n_burn - 1 :: substeps]
    else:
        values = np.concatenate(([y0], fine[substeps - 1 :: substeps]))
    return Path(grid, values)
