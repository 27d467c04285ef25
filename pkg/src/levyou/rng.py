"""Deterministic random streams and distribution samplers.

A stream is a numpy ``Generator`` keyed by a 64-bit master seed and a
stream index through ``SeedSequence(entropy=seed, spawn_key=(index,))``.
Distinct indices give statistically independent streams and the mapping is
stable across platforms and numpy versions of the same major line, which is
what makes parallel experiments bit-reproducible: every replication owns
the stream derived from its own index and no generator is ever shared.

Samplers:

* uniforms on the open interval (0, 1);
* standard normals (numpy's ziggurat; rejection-based, consuming a
  data-dependent but stream-deterministic number of uniforms);
* gamma via Marsaglia-Tsang squeeze for shape >= 1 and, for shape < 1,
  the boost Gamma(shape + 1) * U^(1/shape) evaluated in log space so that
  the astronomically small values produced in the tiny-shape regime stay
  strictly positive instead of underflowing to zero;
* inverse Gaussian via the Michael-Schucany-Haas transformation with the
  usual m/(m + x) root selection (numpy's ``wald``).

A stream is single-owner: one stream must not be used from two threads at
once, but any number of distinct streams may run in parallel.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError

# Smallest positive subnormal double; used to keep subordinator draws > 0.
_TINY = 5e-324


def derive_stream(seed: int, index: int) -> np.random.Generator:
    """Create the generator for (seed, index); deterministic on all platforms."""
    if index < 0:
        raise DomainError("stream index must be nonnegative")
    ss = np.random.SeedSequence(entropy=int(seed) % 2**64, spawn_key=(int(index),))
    return np.random.Generator(np.random.PCG64(ss))


def sample_uniform(stream: np.random.Generator, size=None):
    """Uniform draws on the open interval (0, 1)."""
    u = stream.random(size)
    if size is None:
        return float(u) if u > 0.0 else 2.0**-53
    u[u == 0.0] = 2.0**-53
    return u


def sample_std_normal(stream: np.random.Generator, size=None):
    """Standard normal draws."""
    return stream.standard_normal(size)


def sample_gamma(shape: float, scale: float, stream: np.random.Generator, size=None):
    """Gamma draws with the given shape and scale, valid for any shape > 0."""
    if not (shape > 0.0 and scale > 0.0):
        raise DomainError("gamma shape and scale must be positive")
    if shape >= 1.0:
        return stream.gamma(shape, scale, size)
    # Boost trick: X = Gamma(shape + 1) * U^(1/shape), assembled in log space.
    g = stream.gamma(shape + 1.0, 1.0, size)
    u = sample_uniform(stream, size)
    out = np.exp(np.log(g) + np.log(u) / shape + np.log(scale))
    if size is None:
        return float(out) if out > 0.0 else _TINY
    out[out == 0.0] = _TINY
    return out


def sample_inverse_gaussian(mean: float, shape: float, stream: np.random.Generator, size=None):
    """Inverse Gaussian draws with the given mean and shape parameter."""
    if not (mean > 0.0 and shape > 0.0):
        raise DomainError("inverse Gaussian mean and shape must be positive")
    return stream.wald(mean, shape, size)
