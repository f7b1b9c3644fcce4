r"""Generator of a strictly stable process and its explicit inverse.

For :math:`\alpha \in (0, 2) \setminus \{1\}` and jump intensities
:math:`c_\pm \ge 0` the generator acts on smooth decaying functions as

.. math::

    L f = M_- D_-^\alpha f + M_+ D_+^\alpha f, \qquad M_\pm = c_\pm \Gamma(-\alpha),

and on test functions whose transform vanishes near zero it is inverted by

.. math::

    G f = K_- I_-^\alpha f + K_+ I_+^\alpha f, \qquad
    K_\pm = \frac{M_\pm}{M_-^2 + M_+^2 + 2 M_- M_+ \cos \pi\alpha}.

Two sign conventions for the spectral form are exposed. :func:`symbol` is the
eigenvalue on plane waves, :math:`L e^{iux} = \psi(u) e^{iux}`, which is the
characteristic exponent of the process. :func:`fourier_multiplier` is the
factor applied to :math:`\hat f(u) = \int f e^{iux} dx`; it equals
:math:`\psi(-u)`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from stablefrac._special import gamma, ipow, sin_pi
from stablefrac.errors import DegenerateError, DomainError, MethodError
from stablefrac.fracops import (
    GridFunction,
    Side,
    SpectralFunction,
    apply_spectral,
    frac_integral,
    to_grid,
    to_spectral,
)

ALPHA_EXCLUSION = 1e-6


@dataclass(frozen=True)
class StableParams:
    """Index and one-sided jump intensities of a strictly stable process."""

    alpha: float
    c_minus: float
    c_plus: float

    def __post_init__(self) -> None:
        a, cm, cp = float(self.alpha), float(self.c_minus), float(self.c_plus)
        if not all(map(math.isfinite, (a, cm, cp))):
            raise DomainError("stable parameters must be finite")
        if not 0.0 < a < 2.0:
            raise DomainError(f"alpha must lie in (0, 2), got {a!r}")
        for bad in (0.0, 1.0, 2.0):
            if abs(a - bad) < ALPHA_EXCLUSION:
                raise DomainError(f"alpha = {a!r} is too close to {bad:g}")
        if cm < 0 or cp < 0:
            raise DomainError("c_minus and c_plus must be nonnegative")
        if cm + cp <= 0:
            raise DomainError("c_minus + c_plus must be positive")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "c_minus", cm)
        object.__setattr__(self, "c_plus", cp)

    @property
    def mirrored(self) -> StableParams:
        """Parameters of ``-X``."""
        return StableParams(self.alpha, self.c_plus, self.c_minus)


@dataclass(frozen=True)
class GeneratorConstants:
    m_minus: float
    m_plus: float


@dataclass(frozen=True)
class InverseConstants:
    k_minus: float
    k_plus: float
    denom: float


@dataclass(frozen=True)
class PowerImage:
    """Coefficients of the one-sided powers in the image of a one-sided power.

    ``L f = coef_plus * x_+^(gamma - alpha) + coef_minus * x_-^(gamma - alpha)``.
    """

    coef_plus: float
    coef_minus: float


def generator_constants(p: StableParams) -> GeneratorConstants:
    g = gamma(-p.alpha)
    return GeneratorConstants(p.c_minus * g, p.c_plus * g)


def inverse_constants(p: StableParams) -> InverseConstants:
    m = generator_constants(p)
    denom = (
        m.m_minus**2
        + m.m_plus**2
        + 2.0 * m.m_minus * m.m_plus * math.cos(math.pi * p.alpha)
    )
    scale = m.m_minus**2 + m.m_plus**2
    if not denom > 1e-14 * scale:
        raise DegenerateError(f"inverse denominator {denom!r} is not positive")
    return InverseConstants(m.m_minus / denom, m.m_plus / denom, denom)


def fourier_multiplier(p: StableParams, u):
    r"""Multiplier of :math:`L` on transforms: :math:`M_-(-iu)^\alpha + M_+(iu)^\alpha`."""
    m = generator_constants(p)
    return m.m_minus * ipow(-1, u, p.alpha) + m.m_plus * ipow(1, u, p.alpha)


def symbol(p: StableParams, u):
    r"""Plane-wave eigenvalue :math:`\psi(u)` with :math:`L e^{iux} = \psi(u) e^{iux}`.

    Equals ``fourier_multiplier(p, -u)`` and the characteristic exponent
    :math:`t^{-1} \log E e^{iuX_t}`. ``psi(0) = 0`` and ``Re psi <= 0``.
    """
    return fourier_multiplier(p, -np.asarray(u, dtype=float))


# -- quadrature form -----------------------------------------------------------

_INNER_CELLS = 4
_TAYLOR_TERMS = 8
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(10)
_SMOOTHNESS_TOL = 1e-6


def _spectral_derivatives(f: GridFunction, kmax: int) -> list[np.ndarray]:
    s = to_spectral(f)
    base = s.coeffs.copy()
    if s.n % 2 == 0:
        base[0] = 0.0
    out = [f.values]
    fac = -1j * s.u
    cur = base
    for _ in range(kmax):
        cur = cur * fac
        out.append(to_grid(s.with_coeffs(cur)).values)
    return out


def _tail_ratio(values: np.ndarray) -> float:
    spec = np.abs(np.fft.rfft(values))
    top = spec.max()
    if top == 0:
        return 0.0
    return float(spec[3 * spec.size // 4 :].max() / top)


def _cubic_kernel_weights(n: int, alpha: float, start: int) -> np.ndarray:
    """Weights ``w[m]`` with ``int_{start}^{inf} g(h) h^(-1-alpha) dh ~ sum w[m] g(m)``.

    ``g`` is interpolated on each unit cell by the cubic through the four
    surrounding nodes; it is taken as zero beyond node ``n + 1``. Spacing is
    one; callers rescale by ``dx ** -alpha``.
    """
    cells = np.arange(start, n + 1, dtype=float)
    tau = 0.5 * (_GL_NODES + 1.0)
    wq = 0.5 * _GL_WEIGHTS
    kern = (cells[:, None] + tau[None, :]) ** (-1.0 - alpha) * wq[None, :]
    basis = np.stack(
        [
            -tau * (tau - 1.0) * (tau - 2.0) / 6.0,
            (tau + 1.0) * (tau - 1.0) * (tau - 2.0) / 2.0,
            -(tau + 1.0) * tau * (tau - 2.0) / 2.0,
            (tau + 1.0) * tau * (tau - 1.0) / 6.0,
        ]
    )
    w = np.zeros(n + 4)
    idx = cells.astype(int)
    for shift, b in zip((-1, 0, 1, 2), basis):
        np.add.at(w, idx + shift, kern @ b)
    return w


def _generator_quadrature(p: StableParams, f: GridFunction) -> np.ndarray:
    a = p.alpha
    dx = f.dx
    n = f.n
    compensated = a > 1.0
    if compensated and _tail_ratio(f.values) > _SMOOTHNESS_TOL:
        raise MethodError(
            "input is not resolved on its grid, so the compensated quadrature has no "
            "usable first derivative; use method='spectral'"
        )
    derivs = _spectral_derivatives(f, _TAYLOR_TERMS)
    hs = _INNER_CELLS * dx
    w = _cubic_kernel_weights(n, a, _INNER_CELLS) * dx**-a
    vals = f.values
    # far field, with f = 0 off the grid
    shifted_left = fftconvolve(vals, w)[:n]
    shifted_right = fftconvolve(vals[::-1], w)[:n][::-1]
    k_first = 2 if compensated else 1
    out = np.zeros(n)
    for c, far, sgn in ((p.c_minus, shifted_left, -1.0), (p.c_plus, shifted_right, 1.0)):
        if c == 0:
            continue
        part = far - vals * hs**-a / a
        if compensated:
            part = part - sgn * derivs[1] * hs ** (1.0 - a) / (a - 1.0)
        # Taylor expansion of f(x + sgn h) on (0, hs)
        for k in range(k_first, _TAYLOR_TERMS + 1):
            coef = sgn**k * hs ** (k - a) / (math.factorial(k) * (k - a))
            part = part + coef * derivs[k]
        out += c * part
    return out


def apply_generator(p: StableParams, f, method: str = "spectral"):
    """Apply the generator to grid or spectral data.

    ``method='spectral'`` multiplies the transform by :func:`fourier_multiplier`.
    ``method='quadrature'`` evaluates the jump integrals directly on the grid;
    it requires a :class:`GridFunction` that is negligible near both grid ends.
    """
    if method not in ("spectral", "quadrature"):
        raise MethodError(f"unknown method {method!r}")
    if isinstance(f, SpectralFunction):
        if method != "spectral":
            raise MethodError("quadrature needs grid samples, not spectral data")
        return f.with_coeffs(f.coeffs * fourier_multiplier(p, f.u))
    if not isinstance(f, GridFunction):
        raise TypeError("expected a GridFunction or SpectralFunction")
    if method == "spectral":
        return to_grid(apply_generator(p, to_spectral(f), "spectral"))
    if f.n < 8:
        raise DomainError("quadrature needs at least 8 grid points")
    return f.with_values(_generator_quadrature(p, f))


def invert_generator(p: StableParams, f, method: str = "spectral"):
    """Apply ``K_- I_-^alpha + K_+ I_+^alpha``."""
    if method not in ("spectral", "quadrature"):
        raise MethodError(f"unknown method {method!r}")
    k = inverse_constants(p)
    if isinstance(f, SpectralFunction):
        if method != "spectral":
            raise MethodError("quadrature needs grid samples, not spectral data")
        left = apply_spectral(f, p.alpha, Side.Left).coeffs
        right = apply_spectral(f, p.alpha, Side.Right).coeffs
        return f.with_coeffs(k.k_minus * left + k.k_plus * right)
    if not isinstance(f, GridFunction):
        raise TypeError("expected a GridFunction or SpectralFunction")
    if method == "spectral":
        return to_grid(invert_generator(p, to_spectral(f), "spectral"))
    left = frac_integral(f, p.alpha, Side.Left).values
    right = frac_integral(f, p.alpha, Side.Right).values
    return f.with_values(k.k_minus * left + k.k_plus * right)


# -- powers --------------------------------------------------------------------


def generator_on_power(p: StableParams, gamma_: float, branch: Side) -> PowerImage:
    r"""Image of a one-sided power under the generator.

    ``branch=Side.Left`` is :math:`x_+^\gamma`, ``Side.Right`` is :math:`x_-^\gamma`.
    The image is a combination of :math:`x_\pm^{\gamma - \alpha}`.
    """
    a = p.alpha
    g = float(gamma_)
    if not a - 1.0 < g < a:
        raise DomainError(f"gamma must lie in ({a - 1.0}, {a}), got {g!r}")
    s = float(sin_pi(g - a + 1.0))
    if abs(s) <= 1e-9:
        raise DegenerateError("sin((gamma - alpha + 1) pi) vanishes")
    m = generator_constants(p)
    ratio = gamma(g + 1.0) / gamma(g - a + 1.0)
    same, other = (m.m_minus, m.m_plus) if branch is Side.Left else (m.m_plus, m.m_minus)
    near = ratio * (same + other * float(sin_pi(g + 1.0)) / s)
    far = ratio * other * float(sin_pi(-a)) / s
    if branch is Side.Left:
        return PowerImage(coef_plus=near, coef_minus=far)
    return PowerImage(coef_plus=far, coef_minus=near)
