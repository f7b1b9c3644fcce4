"""Real Gamma function and principal-branch complex powers."""

from __future__ import annotations

import math

import numpy as np

from stablefrac.errors import DomainError

_POLE_TOL = 1e-12


def gamma(x: float) -> float:
    """Real Gamma function, with reflection for negative arguments.

    Raises :class:`DomainError` at the poles ``0, -1, -2, ...``.
    """
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"gamma: non-finite argument {x!r}")
    if x <= 0.0 and abs(x - round(x)) < _POLE_TOL:
        raise DomainError(f"gamma: pole at {x!r}")
    if x >= 0.5:
        return math.gamma(x)
    # reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x)
    return math.pi / (math.sin(math.pi * x) * math.gamma(1.0 - x))


def sin_pi(x):
    """``sin(pi * x)`` with exact zeros at integers."""
    x = np.asarray(x, dtype=float)
    r = np.remainder(x, 2.0)
    out = np.sin(np.pi * r)
    out = np.where(r == 0.0, 0.0, out)
    out = np.where(r == 1.0, 0.0, out)
    return out if out.ndim else float(out)


def ipow(sign: int, u, p: float):
    """Principal-branch power ``(sign * i * u) ** p`` for real ``u``.

    This is the single place where complex powers are formed. For ``u != 0``
    the value is ``|u|**p * exp(i * p * arg)`` with ``arg = sign * sgn(u) * pi/2``,
    which is the principal logarithm since ``arg`` lies in ``(-pi, pi]``.
    At ``u = 0`` the result is ``0`` for ``p > 0`` and ``1`` for ``p == 0``;
    negative ``p`` at ``u = 0`` is left to the caller and returns ``inf``.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    u = np.asarray(u, dtype=float)
    au = np.abs(u)
    phase = sign * np.sign(u) * (0.5 * np.pi * p)
    with np.errstate(divide="ignore"):
        mag = au**p
    out = mag * (np.cos(phase) + 1j * np.sin(phase))
    return out if out.ndim else complex(out)
