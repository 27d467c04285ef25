"""Mean-reversion rate estimators for a discretely sampled path.

Two estimators of the rate a from values Y_{i/M}, i = 0 .. N*M:

* least-squares-based (LSB),

      a_hat = sum_{n=1}^{NM} (Y_{(n-1)/M} - Y_{n/M}) (Y_{(n-1)/M} - Ybar)
              -----------------------------------------------------------
              (1/M) sum_{n=1}^{NM} (Y_{(n-1)/M} - Ybar)^2

  with Ybar = (1/NM) sum_{n=1}^{NM} Y_{n/M}.  The index conventions are
  deliberately asymmetric and are kept exactly as written: Ybar averages
  the points 1 .. NM while both quadratic sums run over 0 .. NM-1; any
  off-by-one drift here silently biases a_hat.

* Davis-McCormick-based (DMB),

      a_hat = max_{0 <= n < NM} M * (log Y_{n/M} - log Y_{(n+1)/M}),

  valid only on strictly positive paths.  It is the more accurate choice
  for subordinator (Gamma / inverse Gaussian / mixed) driving noise; the
  LSB estimator is the one to use for Brownian or unspecified noise.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .car1 import Path
from .errors import DegenerateSampleError, PositivityError

LSB = "lsb"
DMB = "dmb"


@dataclass(frozen=True)
class RateEstimate:
    a_hat: float
    method: str


def lsb_estimate(path: Path) -> RateEstimate:
    """Least-squares-based estimate of the mean-reversion rate.

    Shift-invariant: adding a constant to the path leaves it unchanged.
    A negative estimate is returned as-is with a warning, since it signals
    model misfit that should not be masked.
    """
    y = path.values
    m = path.grid.per_period
    ybar = y[1:].mean()
    centered = y[:-1] - ybar
    denom = (centered * centered).sum() / m
    if denom == 0.0:
        raise DegenerateSampleError("constant path: rate is unidentifiable")
    a_hat = float(((y[:-1] - y[1:]) * centered).sum() / denom)
    if a_hat < 0.0:
        warnings.warn(
            f"negative mean-reversion estimate {a_hat:.6g}: the series may not be mean-reverting",
            stacklevel=2,
        )
    return RateEstimate(a_hat=a_hat, method=LSB)


def dmb_estimate(path: Path) -> RateEstimate:
    """Davis-McCormick-based estimate; requires a strictly positive path.

    Scale-invariant: multiplying the path by c > 0 leaves it unchanged.
    """
    y = path.values
    if np.any(y <= 0.0):
        raise PositivityError(
            "path contains nonpositive values: use the LSB estimator instead"
        )
    logy = np.log(y)
    a_hat = float(path.grid.per_period * (logy[:-1] - logy[1:]).max())
    return RateEstimate(a_hat=a_hat, method=DMB)
