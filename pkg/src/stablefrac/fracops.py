r"""Riemann--Liouville fractional operators on uniform grids and in Fourier space.

The left and right operators of order :math:`\lambda` are

.. math::

    W_-^\lambda f(x) = \frac{1}{\Gamma(\lambda)} \int_{-\infty}^x (x - t)^{\lambda - 1} f(t)\,dt,
    \qquad
    W_+^\lambda f(x) = \frac{1}{\Gamma(\lambda)} \int_x^{\infty} (t - x)^{\lambda - 1} f(t)\,dt

for :math:`\lambda > 0`, fractional derivatives for :math:`\lambda < 0` and the
identity for :math:`\lambda = 0`.

Fourier convention
------------------

Throughout the package :math:`\hat f(u) = \int f(x) e^{iux}\,dx`. Under this
convention :math:`W_-^\lambda` multiplies :math:`\hat f` by :math:`(-iu)^{-\lambda}`
and :math:`W_+^\lambda` by :math:`(iu)^{-\lambda}`, principal branch.

A :class:`SpectralFunction` stores :math:`\hat f(u_k)` on the centred frequency
grid :math:`u_k = k\,\Delta u`, :math:`k = -\lfloor n/2 \rfloor, \dots`. numpy's
``ifft`` uses the kernel :math:`e^{+2\pi i jk/n}`, which matches the sign of
:math:`e^{iux}`, so the forward transform is
``n * dx * exp(i u x0) * ifft(values)`` and the inverse is
``fft(coeffs * exp(-i u x0)) / (n * dx)``. :func:`to_spectral` and
:func:`to_grid` are the only places where this adjustment is made.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve

from stablefrac._special import gamma, ipow, sin_pi
from stablefrac.errors import (
    DegenerateError,
    DomainError,
    LizorkinError,
    SingularFrequencyError,
)

INTEGER_TOL = 1e-9


class Side(enum.Enum):
    """Which tail the operator integrates over."""

    #: :math:`W_-`, lower limit :math:`-\infty`.
    Left = enum.auto()
    #: :math:`W_+`, upper limit :math:`+\infty`.
    Right = enum.auto()

    @property
    def mirror(self) -> Side:
        return Side.Right if self is Side.Left else Side.Left


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class GridFunction:
    """A real function sampled at ``x0 + j * dx``, ``j = 0, ..., n - 1``."""

    x0: float
    dx: float
    values: np.ndarray
    #: number of points at each end whose values are known to be low accuracy
    edge_points: int = 0

    def __post_init__(self) -> None:
        values = _frozen_array(self.values, float)
        if values.ndim != 1 or values.size < 2:
            raise DomainError("GridFunction needs a 1-d array with at least 2 values")
        if not np.all(np.isfinite(values)):
            raise DomainError("GridFunction values must be finite")
        if not (math.isfinite(self.dx) and self.dx > 0):
            raise DomainError(f"grid spacing must be positive, got {self.dx!r}")
        if not math.isfinite(self.x0):
            raise DomainError("grid origin must be finite")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "x0", float(self.x0))
        object.__setattr__(self, "dx", float(self.dx))

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)

    def with_values(self, values, edge_points: int = 0) -> GridFunction:
        return GridFunction(self.x0, self.dx, values, edge_points)


@dataclass(frozen=True)
class SpectralFunction:
    """Fourier transform samples on a centred frequency grid.

    ``coeffs[k]`` approximates :math:`\\hat f(u_k)` with
    ``u_k = (k - n // 2) * du``. ``x0`` is the left end of the spatial grid the
    samples reconstruct onto, whose spacing is ``2 pi / (n du)``.
    """

    du: float
    coeffs: np.ndarray
    x0: float = field(default=float("nan"))

    def __post_init__(self) -> None:
        coeffs = _frozen_array(self.coeffs, complex)
        if coeffs.ndim != 1 or coeffs.size < 2:
            raise DomainError("SpectralFunction needs at least 2 coefficients")
        if not np.all(np.isfinite(coeffs)):
            raise DomainError("SpectralFunction coefficients must be finite")
        if not (math.isfinite(self.du) and self.du > 0):
            raise DomainError(f"frequency spacing must be positive, got {self.du!r}")
        x0 = float(self.x0)
        if math.isnan(x0):
            x0 = -math.pi / self.du
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "du", float(self.du))
        object.__setattr__(self, "x0", x0)

    @property
    def n(self) -> int:
        return self.coeffs.size

    @property
    def dx(self) -> float:
        return 2.0 * math.pi / (self.n * self.du)

    @property
    def u(self) -> np.ndarray:
        return self.du * (np.arange(self.n) - self.n // 2)

    @property
    def zero_index(self) -> int:
        return self.n // 2

    def with_coeffs(self, coeffs) -> SpectralFunction:
        return SpectralFunction(self.du, coeffs, self.x0)


@dataclass(frozen=True)
class SampleGrid:
    """Spatial grid of ``n`` points spaced ``dx``; centred on 0 unless ``x0`` is given."""

    n: int
    dx: float
    x0: float | None = None

    def __post_init__(self) -> None:
        if self.n < 4:
            raise DomainError("grid needs at least 4 points")
        if not self.dx > 0:
            raise DomainError("grid spacing must be positive")

    @property
    def origin(self) -> float:
        return -0.5 * self.n * self.dx if self.x0 is None else float(self.x0)

    @property
    def du(self) -> float:
        return 2.0 * math.pi / (self.n * self.dx)


# -- Fourier transforms ------------------------------------------------------


def to_spectral(f: GridFunction) -> SpectralFunction:
    """Riemann-sum Fourier transform of grid samples (see module docstring)."""
    n = f.n
    du = 2.0 * math.pi / (n * f.dx)
    u = du * (np.arange(n) - n // 2)
    raw = np.fft.fftshift(np.fft.ifft(f.values)) * (n * f.dx)
    return SpectralFunction(du, raw * np.exp(1j * u * f.x0), f.x0)


def to_grid(s: SpectralFunction, *, return_imag: bool = False):
    """Inverse of :func:`to_spectral`.

    The real part is returned as a :class:`GridFunction`. With
    ``return_imag=True`` the largest imaginary residual is returned as well.
    """
    shifted = np.fft.ifftshift(s.coeffs * np.exp(-1j * s.u * s.x0))
    vals = np.fft.fft(shifted) / (s.n * s.dx)
    g = GridFunction(s.x0, s.dx, vals.real)
    if return_imag:
        return g, float(np.max(np.abs(vals.imag)))
    return g


# -- multipliers --------------------------------------------------------------


def spectral_multiplier(order: float, side: Side, u):
    r"""Fourier multiplier of :math:`W_\mp^{\lambda}`.

    Returns :math:`(-iu)^{-\lambda}` for ``Side.Left`` and :math:`(iu)^{-\lambda}`
    for ``Side.Right``. ``order`` may be negative (derivatives).
    """
    order = float(order)
    u_arr = np.asarray(u, dtype=float)
    if order > 0 and np.any(u_arr == 0.0):
        raise SingularFrequencyError(
            f"multiplier of a fractional integral (order {order}) is singular at u = 0"
        )
    sign = -1 if side is Side.Left else 1
    return ipow(sign, u, -order)


def apply_spectral(f: SpectralFunction, order: float, side: Side) -> SpectralFunction:
    """Apply :math:`W^{order}` on ``side`` by pointwise multiplication."""
    order = float(order)
    if order == 0.0:
        return f.with_coeffs(f.coeffs)
    k0 = f.zero_index
    if order > 0 and f.coeffs[k0] != 0:
        raise LizorkinError(
            "fractional integral needs a zero coefficient at u = 0 "
            f"(got {f.coeffs[k0]!r})"
        )
    u = f.u
    mult = np.zeros(f.n, dtype=complex)
    nz = u != 0.0
    mult[nz] = spectral_multiplier(order, side, u[nz])
    return f.with_coeffs(f.coeffs * mult)


def crossed_compose_coeffs(lam: float, mu: float) -> tuple[float, float]:
    r"""Coefficients of :math:`W_+^\lambda W_-^\mu = A_- W_-^{\lambda+\mu} + A_+ W_+^{\lambda+\mu}`.

    Returns ``(A_minus, A_plus)``.
    """
    total = lam + mu
    if abs(total - round(total)) <= INTEGER_TOL:
        raise DegenerateError(
            f"lambda + mu = {total!r} is within {INTEGER_TOL} of an integer"
        )
    s = sin_pi(total)
    return float(sin_pi(mu) / s), float(sin_pi(lam) / s)


# -- grid operators -----------------------------------------------------------


def _check_grid_input(f: GridFunction) -> None:
    if f.n < 4:
        raise DomainError("grid too short: need at least 4 points")
    if not np.all(np.isfinite(f.values)):
        raise DomainError("NaN or infinite value in input")


def _left_integral(values: np.ndarray, dx: float, order: float) -> np.ndarray:
    # Product integration against the piecewise-linear interpolant of f.
    n = values.size
    a1 = order + 1.0
    m = np.arange(n, dtype=float)
    w = np.empty(n)
    w[0] = 1.0
    mm = m[1:]
    w[1:] = (mm + 1.0) ** a1 - 2.0 * mm**a1 + (mm - 1.0) ** a1
    out = fftconvolve(values, w)[:n]
    # first node only has a cell on its right
    j = m[1:]
    first = (j - 1.0) ** a1 - (j - 1.0 - order) * j**order
    out[1:] += (first - w[1:]) * values[0]
    out[0] = 0.0
    return out * dx**order / gamma(order + 2.0)


def frac_integral(f: GridFunction, order: float, side: Side) -> GridFunction:
    """Fractional integral of grid data; the function is taken as 0 off the grid."""
    order = float(order)
    if not order > 0:
        raise DomainError(f"fractional integral needs a positive order, got {order!r}")
    _check_grid_input(f)
    if side is Side.Left:
        vals = _left_integral(f.values, f.dx, order)
    else:
        vals = _left_integral(f.values[::-1], f.dx, order)[::-1]
    return f.with_values(vals)


def _d1(g: np.ndarray, dx: float) -> np.ndarray:
    return np.gradient(g, dx, edge_order=2)


def _d2(g: np.ndarray, dx: float) -> np.ndarray:
    out = np.empty_like(g)
    out[1:-1] = g[2:] - 2.0 * g[1:-1] + g[:-2]
    out[0] = 2.0 * g[0] - 5.0 * g[1] + 4.0 * g[2] - g[3]
    out[-1] = 2.0 * g[-1] - 5.0 * g[-2] + 4.0 * g[-3] - g[-4]
    return out / dx**2


def frac_derivative(f: GridFunction, order: float, side: Side) -> GridFunction:
    """Riemann--Liouville derivative of non-integer order in ``(0, 2)``.

    Computed as an integer derivative of a fractional integral; the outer
    derivative uses second-order central differences and one-sided stencils
    at the two end points, which are flagged through ``edge_points``.
    """
    order = float(order)
    if not order > 0:
        raise DomainError(f"derivative order must be positive, got {order!r}")
    if abs(order - round(order)) <= INTEGER_TOL:
        raise DomainError(
            f"order {order!r} is an integer; use an ordinary finite difference instead"
        )
    if order > 2:
        raise DomainError("derivative orders above 2 are not supported")
    n_int = math.ceil(order)
    g = frac_integral(f, n_int - order, side).values
    if n_int == 1:
        d = _d1(g, f.dx)
    else:
        d = _d2(g, f.dx)
    if side is Side.Right and n_int % 2 == 1:
        d = -d
    return f.with_values(d, edge_points=1)


def frac_op(f: GridFunction, lam: float, side: Side) -> GridFunction:
    r"""Signed-order operator :math:`W^\lambda`: integral, derivative or identity."""
    lam = float(lam)
    if lam > 0:
        return frac_integral(f, lam, side)
    if lam < 0:
        return frac_derivative(f, -lam, side)
    return f.with_values(f.values, f.edge_points)


# -- test functions -----------------------------------------------------------


def lizorkin_test(
    vanish_order: int,
    center: float,
    width: float,
    grid: SampleGrid,
    *,
    shift: float = 0.0,
    phase: float = 0.0,
) -> SpectralFunction:
    r"""Fourier samples of a real test function with compact spectrum away from 0.

    On positive frequencies the transform is the bump
    :math:`\exp(1 - (1 - s^2)^{-p})` with :math:`s = 2(u - c)/w` and
    :math:`p` = ``vanish_order``; larger ``p`` makes the bump flatter at the
    edge of its support. Negative frequencies carry the complex conjugate, so
    the function is real. ``shift`` translates the function in space and
    ``phase`` rotates the positive-frequency half.

    The bump vanishes identically on ``|u| <= |center| - width / 2``, so every
    derivative of the transform at the origin is zero.
    """
    if int(vanish_order) != vanish_order or vanish_order < 1:
        raise DomainError("vanish_order must be an integer >= 1")
    if center == 0 or not width > 0:
        raise DomainError("center must be nonzero and width positive")
    c = abs(float(center))
    half = 0.5 * float(width)
    if c - half <= 0:
        raise DomainError(
            f"bump support [{c - half}, {c + half}] touches the zero frequency"
        )
    n = grid.n
    du = grid.du
    if c + half >= du * (n // 2 - 1):
        raise DomainError("bump support reaches the Nyquist frequency of the grid")
    u = du * (np.arange(n) - n // 2)
    s = (np.abs(u) - c) / half
    inside = np.abs(s) < 1.0
    bump = np.zeros(n)
    bump[inside] = np.exp(1.0 - (1.0 - s[inside] ** 2) ** (-float(vanish_order)))
    ang = np.sign(u) * phase + u * shift
    coeffs = bump * np.exp(1j * ang)
    coeffs[u == 0.0] = 0.0
    if n % 2 == 0:
        coeffs[0] = 0.0
    return SpectralFunction(du, coeffs, grid.origin)
