"""Recovery of unit-interval driving increments from a sampled path.

Given the path Y_{i/M} and a rate a, the increment of the driving process
over [n-1, n] is reconstructed by the trapezoid-corrected sum

    dL_n = (a / (M sigma)) * sum_{i=(n-1)M+1}^{nM} Y_{i/M}
           + (1/sigma - a / (2 M sigma)) * (Y_n - Y_{n-1}),

for n = 1 .. N.  The formula is linear in the path values, and on the
noiseless dynamics Y(t) = exp(-a t) Y(0) with the true rate each recovered
increment vanishes at the trapezoid rate O(1/M^2).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .car1 import Path
from .errors import DomainError


@dataclass(eq=False)
class IncrementSeries:
    """Recovered unit-interval increments plus the parameters used."""

    values: np.ndarray = field(repr=False)
    a_used: float
    sigma_used: float = 1.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1:
            raise DomainError("increment series must be one-dimensional")

    @property
    def n(self) -> int:
        return len(self.values)


def recover_increments(path: Path, a_hat: float, sigma: float = 1.0) -> IncrementSeries:
    """Recover the N unit-interval driving increments from a path."""
    if not np.isfinite(a_hat):
        raise DomainError("a_hat must be finite")
    if not (np.isfinite(sigma) and sigma > 0.0):
        raise DomainError("sigma must be a positive real")
    y = path.values
    n, m = path.grid.n_periods, path.grid.per_period
    inner_sums = y[1:].reshape(n, m).sum(axis=1)
    block = y[::m]
    values = (a_hat / (m * sigma)) * inner_sums + (1.0 / sigma - a_hat / (2.0 * m * sigma)) * (
        block[1:] - block[:-1]
    )
    return IncrementSeries(values=values, a_used=float(a_hat), sigma_used=float(sigma))
