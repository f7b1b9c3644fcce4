r"""Tanaka function, class-C convolutions and power-decomposition constants.

Everything here assumes :math:`\alpha \in (1, 2)`, where points are hit and
local times exist. The Tanaka function

.. math::

    F(x) = \kappa_+ (x^-)^{\alpha - 1} + \kappa_- (x^+)^{\alpha - 1}

solves :math:`L F = \delta_0`. Note the crossing: :math:`\kappa_-` sits on the
positive half-line.

For :math:`\gamma \in (\alpha - 1, \alpha)`, :math:`L|\cdot|^\gamma(y)` equals
``k_plus * y**(gamma - alpha)`` for ``y > 0`` and
``k_minus * |y|**(gamma - alpha)`` for ``y < 0``, so the drift of
:math:`|X_t - x|^\gamma` uses ``k_plus`` while the path is above ``x``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from stablefrac._special import gamma, sin_pi
from stablefrac.errors import DegenerateError, DomainError
from stablefrac.fracops import GridFunction
from stablefrac.generator import StableParams, generator_constants

ARCCOS_TOL = 1e-12


class MartingaleClass(enum.Enum):
    Submartingale = enum.auto()
    SemimartingaleNonMonotone = enum.auto()


@dataclass(frozen=True)
class TanakaConstants:
    kappa_minus: float
    kappa_plus: float


@dataclass(frozen=True)
class PowerConstants:
    gamma: float
    k_minus: float
    k_plus: float
    beta_crit: float


@dataclass(frozen=True)
class CriticalExponent:
    a: float
    c: float
    beta_crit: float


@dataclass(frozen=True)
class SignedMeasure:
    """Weighted atoms, optionally plus a density sampled on a grid."""

    atoms: tuple[tuple[float, float], ...] = ()
    density: GridFunction | None = None
    _locs: np.ndarray = field(init=False, repr=False, compare=False)
    _weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        atoms = tuple((float(a), float(w)) for a, w in self.atoms)
        locs = np.array([a for a, _ in atoms], dtype=float)
        weights = np.array([w for _, w in atoms], dtype=float)
        if not (np.all(np.isfinite(locs)) and np.all(np.isfinite(weights))):
            raise DomainError("atom locations and weights must be finite")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "_locs", locs)
        object.__setattr__(self, "_weights", weights)

    @property
    def locations(self) -> np.ndarray:
        return self._locs

    @property
    def weights(self) -> np.ndarray:
        return self._weights

    def scaled(self, factor: float) -> SignedMeasure:
        density = None
        if self.density is not None:
            density = self.density.with_values(factor * self.density.values)
        return SignedMeasure(tuple((a, factor * w) for a, w in self.atoms), density)

    def moment(self, alpha: float) -> float:
        """``int |x|^(alpha - 1) |mu|(dx)``."""
        total = float(np.sum(np.abs(self._weights) * np.abs(self._locs) ** (alpha - 1.0)))
        if self.density is not None:
            d = self.density
            total += float(np.sum(np.abs(d.values) * np.abs(d.x) ** (alpha - 1.0)) * d.dx)
        return total


def _require_recurrent(p: StableParams) -> None:
    if not 1.0 < p.alpha < 2.0:
        raise DomainError(f"needs alpha in (1, 2), got {p.alpha!r}")


def tanaka_constants(p: StableParams) -> TanakaConstants:
    _require_recurrent(p)
    a = p.alpha
    cm, cp = p.c_minus, p.c_plus
    denom = gamma(a) * gamma(-a) * (cp * cp + cm * cm + 2.0 * cp * cm * math.cos(math.pi * a))
    return TanakaConstants(cm / denom, cp / denom)


def tanaka_F(p: StableParams, x):
    k = tanaka_constants(p)
    x = np.asarray(x, dtype=float)
    e = p.alpha - 1.0
    out = np.where(
        x > 0, k.kappa_minus * np.abs(x) ** e, np.where(x < 0, k.kappa_plus * np.abs(x) ** e, 0.0)
    )
    return out if out.ndim else float(out)


def _power_moments(x: float, lo, hi, p: float):
    """``int_lo^hi |x - y|^p dy`` and ``int_lo^hi |x - y|^p (y - lo) dy``.

    Each interval must lie on one side of ``x``.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    below = hi <= x
    # distances at the two ends, ordered so s_near <= s_far
    s_lo = np.abs(x - lo)
    s_hi = np.abs(x - hi)
    p1, p2 = p + 1.0, p + 2.0
    i0 = np.abs(s_lo**p1 - s_hi**p1) / p1
    m1 = np.abs(s_lo**p2 - s_hi**p2) / p2
    # y - lo = s_lo - s when below x, s - s_lo when above
    i1 = np.where(below, s_lo * i0 - m1, m1 - s_lo * i0)
    return i0, i1


def _density_convolution(p: StableParams, density: GridFunction, x: float) -> float:
    # product integration: exact kernel moments against the linear interpolant
    k = tanaka_constants(p)
    y = density.x
    rho = density.values
    a, b = y[:-1].copy(), y[1:].copy()
    base, r0, r1 = y[:-1], rho[:-1], rho[1:]
    cut = np.flatnonzero((a < x) & (x < b))
    if cut.size:
        j = int(cut[0])
        # split the cell holding x into [a_j, x] and [x, b_j]
        a, b = np.append(a, x), np.append(b, b[j])
        b[j] = x
        base, r0, r1 = np.append(base, base[j]), np.append(r0, r0[j]), np.append(r1, r1[j])
    i0, i1 = _power_moments(x, a, b, p.alpha - 1.0)
    i1_cell = i1 + (a - base) * i0
    contrib = r0 * i0 + (r1 - r0) * i1_cell / density.dx
    left = b <= x
    return k.kappa_minus * float(np.sum(contrib[left])) + k.kappa_plus * float(
        np.sum(contrib[~left])
    )


def class_C_eval(p: StableParams, mu: SignedMeasure, x):
    """Evaluate ``(F * mu)(x)``."""
    _require_recurrent(p)
    if not math.isfinite(mu.moment(p.alpha)):
        raise DomainError("measure violates the moment condition")
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros(xs.size)
    if mu.locations.size:
        out += np.sum(mu.weights[None, :] * tanaka_F(p, xs[:, None] - mu.locations[None, :]), axis=1)
    if mu.density is not None:
        out += np.array([_density_convolution(p, mu.density, xi) for xi in xs])
    return out if np.ndim(x) else float(out[0])


def _check_gamma(p: StableParams, g: float) -> float:
    _require_recurrent(p)
    g = float(g)
    if not p.alpha - 1.0 < g < p.alpha:
        raise DomainError(f"gamma must lie in ({p.alpha - 1.0}, {p.alpha}), got {g!r}")
    return g


def critical_beta(p: StableParams) -> CriticalExponent:
    _require_recurrent(p)
    a = math.cos(math.pi * p.alpha)
    c = min(p.c_minus, p.c_plus) / max(p.c_minus, p.c_plus)
    q = c * c * (1.0 - a * a)
    r = (1.0 + a * c) ** 2
    arg = (q - r) / (q + r)
    if abs(arg) > 1.0 + ARCCOS_TOL:
        raise DegenerateError(f"arccos argument {arg!r} outside [-1, 1]")
    arg = min(1.0, max(-1.0, arg))
    return CriticalExponent(a, c, math.acos(arg) / math.pi)


def power_constants(p: StableParams, gamma_: float) -> PowerConstants:
    g = _check_gamma(p, gamma_)
    a = p.alpha
    s = float(sin_pi(g - a + 1.0))
    if abs(s) <= 1e-9:
        raise DegenerateError("sin((gamma - alpha + 1) pi) vanishes")
    m = generator_constants(p)
    ratio = gamma(g + 1.0) / gamma(g - a + 1.0)
    sa = float(sin_pi(-a)) / s
    sg = float(sin_pi(g + 1.0)) / s
    k_minus = ratio * (m.m_plus * sa + m.m_minus * sg + m.m_plus)
    k_plus = ratio * (m.m_minus * sa + m.m_plus * sg + m.m_minus)
    return PowerConstants(g, k_minus, k_plus, critical_beta(p).beta_crit)


def classify(p: StableParams, gamma_: float) -> MartingaleClass:
    """Whether ``|X_t - x|^gamma`` is a submartingale."""
    g = _check_gamma(p, gamma_)
    if g >= critical_beta(p).beta_crit:
        return MartingaleClass.Submartingale
    return MartingaleClass.SemimartingaleNonMonotone


def h_functions(p: StableParams, gamma_: float) -> tuple[float, float]:
    """Trigonometric factors carrying the signs of ``(k_minus, k_plus)``.

    With ``c = min/max`` of the intensities the two forms are
    ``sin(-a pi) - c sin(g pi) - sin((g - a) pi)`` and
    ``c sin(-a pi) - sin(g pi) - c sin((g - a) pi)``. For ``c_minus <= c_plus``
    they carry the signs of ``k_minus`` and ``k_plus`` in that order; the roles
    swap otherwise, and the pair is returned reordered to match.
    """
    a = p.alpha
    g = float(gamma_)
    c = min(p.c_minus, p.c_plus) / max(p.c_minus, p.c_plus)
    sa, sg, sga = math.sin(-a * math.pi), math.sin(g * math.pi), math.sin((g - a) * math.pi)
    first = sa - c * sg - sga
    second = c * sa - sg - c * sga
    if p.c_minus <= p.c_plus:
        return first, second
    return second, first
