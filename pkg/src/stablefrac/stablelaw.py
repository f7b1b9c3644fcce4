"""Parametrizations, characteristic exponent, Lévy density and exact sampling.

Random draws come from a counter-based Philox stream keyed by
``(seed, stream)``; see :func:`make_rng`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from stablefrac._special import gamma
from stablefrac.errors import DomainError
from stablefrac.generator import ALPHA_EXCLUSION, StableParams


class ExpectedDivergenceWarning(UserWarning):
    """Requested moment does not exist; the estimate will not stabilize."""


@dataclass(frozen=True)
class SkewScaleParams:
    alpha: float
    beta_skew: float
    sigma: float

    def __post_init__(self) -> None:
        a = float(self.alpha)
        if not 0.0 < a < 2.0 or min(abs(a - 1.0), a, 2.0 - a) < ALPHA_EXCLUSION:
            raise DomainError(f"alpha must lie in (0, 2) away from 1, got {a!r}")
        if not -1.0 <= self.beta_skew <= 1.0:
            raise DomainError(f"beta_skew must lie in [-1, 1], got {self.beta_skew!r}")
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise DomainError(f"sigma must be positive, got {self.sigma!r}")


def _scale_factor(alpha: float) -> float:
    # negative for every admissible alpha
    return gamma(-alpha) * math.cos(0.5 * math.pi * alpha)


def to_skew_scale(p: StableParams) -> SkewScaleParams:
    total = p.c_plus + p.c_minus
    return SkewScaleParams(
        p.alpha,
        (p.c_plus - p.c_minus) / total,
        -total * _scale_factor(p.alpha),
    )


def from_skew_scale(s: SkewScaleParams) -> StableParams:
    total = -s.sigma / _scale_factor(s.alpha)
    c_plus = 0.5 * total * (1.0 + s.beta_skew)
    c_minus = 0.5 * total * (1.0 - s.beta_skew)
    if min(c_plus, c_minus) < -1e-12:
        raise DomainError("skew/scale parameters give a negative jump intensity")
    return StableParams(s.alpha, max(c_minus, 0.0), max(c_plus, 0.0))


def char_exponent(p: StableParams, u):
    """``log E exp(iuX_1) = -sigma |u|^alpha (1 - i beta sgn(u) tan(pi alpha / 2))``."""
    s = to_skew_scale(p)
    u = np.asarray(u, dtype=float)
    tan = math.tan(0.5 * math.pi * s.alpha)
    out = -s.sigma * np.abs(u) ** s.alpha * (1.0 - 1j * s.beta_skew * np.sign(u) * tan)
    return out if out.ndim else complex(out)


def levy_density(p: StableParams, h):
    h_arr = np.asarray(h, dtype=float)
    if np.any(h_arr == 0.0):
        raise DomainError("the Lévy density is not defined at h = 0")
    c = np.where(h_arr > 0, p.c_plus, p.c_minus)
    out = c * np.abs(h_arr) ** (-p.alpha - 1.0)
    return out if out.ndim else float(out)


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Independent Philox generator for ``(seed, stream)``."""
    if int(seed) != seed or seed < 0 or int(stream) != stream or stream < 0:
        raise DomainError("seed and stream must be nonnegative integers")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(stream)])))


def sample_standard(p: StableParams, rng: np.random.Generator, size=None):
    """Draws of ``X_1`` by the Chambers--Mallows--Stuck transform.

    ``X_t`` has the law of ``t ** (1 / alpha) * X_1``.
    """
    s = to_skew_scale(p)
    a = s.alpha
    v = rng.uniform(-0.5 * math.pi, 0.5 * math.pi, size)
    w = rng.standard_exponential(size)
    zeta = s.beta_skew * math.tan(0.5 * math.pi * a)
    shift = math.atan(zeta) / a
    amp = (1.0 + zeta * zeta) ** (0.5 / a)
    av = a * (v + shift)
    x = (
        amp
        * np.sin(av)
        / np.cos(v) ** (1.0 / a)
        * (np.cos(v - av) / w) ** ((1.0 - a) / a)
    )
    x = x * s.sigma ** (1.0 / a)
    return x if size is not None else float(x)


def empirical_moment(
    p: StableParams, gamma_: float, t: float, n: int, rng: np.random.Generator
) -> float:
    """Monte Carlo estimate of ``E|X_t|^gamma`` started from 0."""
    if gamma_ == 0:
        return 1.0
    if not -1.0 < gamma_ < p.alpha:
        warnings.warn(
            f"E|X_t|^{gamma_} is infinite for alpha = {p.alpha}",
            ExpectedDivergenceWarning,
            stacklevel=2,
        )
    x = t ** (1.0 / p.alpha) * sample_standard(p, rng, int(n))
    return float(np.mean(np.abs(x) ** gamma_))
