"""Driving-process increment laws for the supported Levy families.

Each family is parameterized by the mean rate mu = E[L(1)] and variance
rate eta2 = Var[L(1)] of the driving process at unit time, so an increment
over a step dt always has mean mu * dt and variance eta2 * dt:

* Brownian motion:   Normal(mu * dt, eta2 * dt)
* Gamma:             Gamma(shape = (mu^2 / eta2) * dt, scale = eta2 / mu)
* Inverse Gaussian:  IG(mean = mu * dt, shape = mu^3 * dt^2 / eta2)
* Mixed IG + Gamma:  independent sum of a Gamma and an IG increment whose
  rates split (mu, eta2) by a weight w (Gamma gets w, IG gets 1 - w);
  the law is never pinned down further by the methodology, so the
  symmetric default w = 1/2 is used and the weight is exposed.

Gamma and inverse Gaussian are subordinators, so their mean rate must be
strictly positive and every sampled increment is strictly positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError
from .rng import sample_gamma, sample_inverse_gaussian

_SUBORDINATORS = ("gamma", "ig", "mixed")


class DrivingKind(str, Enum):
    """Supported driving-process families, tagged by their CLI names."""

    BROWNIAN = "bm"
    GAMMA = "gamma"
    INVERSE_GAUSSIAN = "ig"
    MIXED = "mixed"

    @property
    def is_subordinator(self) -> bool:
        return self.value in _SUBORDINATORS


@dataclass(frozen=True)
class LevyParams:
    """Unit-time mean and variance rates of the driving process."""

    mu: float
    eta2: float

    def __post_init__(self):
        if not (np.isfinite(self.mu) and np.isfinite(self.eta2)):
            raise DomainError("mu and eta2 must be finite")
        if self.eta2 <= 0.0:
            raise DomainError("eta2 must be positive")


@dataclass(frozen=True)
class NormalIncrement:
    mean: float
    variance: float


@dataclass(frozen=True)
class GammaIncrement:
    shape: float
    scale: float


@dataclass(frozen=True)
class InverseGaussianIncrement:
    mean: float
    shape: float


@dataclass(frozen=True)
class MixedIncrement:
    gamma: GammaIncrement
    inverse_gaussian: InverseGaussianIncrement
    weight: float


def _require_subordinator_mu(kind: DrivingKind, params: LevyParams) -> None:
    if params.mu <= 0.0:
        raise DomainError(f"{kind.value} driving noise requires mu > 0")


def increment_params(kind: DrivingKind, params: LevyParams, dt: float, weight: float = 0.5):
    """Family-specific parameters of one increment over a step of length dt."""
    if not (np.isfinite(dt) and dt > 0.0):
        raise DomainError("dt must be a positive real")
    mu, eta2 = params.mu, params.eta2
    if kind is DrivingKind.BROWNIAN:
        return NormalIncrement(mean=mu * dt, variance=eta2 * dt)
    if kind is DrivingKind.GAMMA:
        _require_subordinator_mu(kind, params)
        return GammaIncrement(shape=(mu * mu / eta2) * dt, scale=eta2 / mu)
    if kind is DrivingKind.INVERSE_GAUSSIAN:
        _require_subordinator_mu(kind, params)
        return InverseGaussianIncrement(mean=mu * dt, shape=mu**3 * dt * dt / eta2)
    if kind is DrivingKind.MIXED:
        _require_subordinator_mu(kind, params)
        if not 0.0 < weight < 1.0:
            raise DomainError("mixed-process weight must lie in (0, 1)")
        gpart = increment_params(DrivingKind.GAMMA, LevyParams(weight * mu, weight * eta2), dt)
        igpart = increment_params(
            DrivingKind.INVERSE_GAUSSIAN,
            LevyParams((1.0 - weight) * mu, (1.0 - weight) * eta2),
            dt,
        )
        return MixedIncrement(gamma=gpart, inverse_gaussian=igpart, weight=weight)
    raise DomainError(f"unknown driving kind: {kind!r}")


def sample_increment_sequence(
    kind: DrivingKind,
    params: LevyParams,
    dt: float,
    count: int,
    stream: np.random.Generator,
    weight: float = 0.5,
) -> np.ndarray:
    """Draw ``count`` independent increments of the driving process over dt."""
    if count < 1:
        raise DomainError("count must be at least 1")
    spec = increment_params(kind, params, dt, weight)
    if isinstance(spec, NormalIncrement):
        return stream.normal(spec.mean, np.sqrt(spec.variance), count)
    if isinstance(spec, GammaIncrement):
        return sample_gamma(spec.shape, spec.scale, stream, count)
    if isinstance(spec, InverseGaussianIncrement):
        return sample_inverse_gaussian(spec.mean, spec.shape, stream, count)
    # Mixed: gamma component drawn first, then the IG component.
    g = sample_gamma(spec.gamma.shape, spec.gamma.scale, stream, count)
    ig = sample_inverse_gaussian(
        spec.inverse_gaussian.mean, spec.inverse_gaussian.shape, stream, count
    )
    return g + ig
