"""Path simulation, occupation local time, and Monte Carlo residual checks.

Paths are sampled exactly on a uniform time grid: each increment is
``dt ** (1 / alpha)`` times a standard stable draw. Path ``i`` of a batch with
base seed ``s`` uses the random stream ``(s, i)``, so any subset of a batch can
be regenerated on its own and results do not depend on chunking or ordering.

Time integrals use left end points, ``sum_k dt * g(X_{k dt})`` for
``k = 0, ..., n_steps - 1``. The martingale parts of the Tanaka, Meyer--Itô and
power decompositions are never simulated; they are recovered as residuals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from stablefrac.errors import DomainError
from stablefrac.generator import StableParams
from stablefrac.stablelaw import make_rng, sample_standard
from stablefrac.tanaka import SignedMeasure, class_C_eval, power_constants, tanaka_F

DRIFT_CLAMP = 1e-10
_CHUNK = 500


@dataclass(frozen=True)
class PathSample:
    t_grid: np.ndarray
    values: np.ndarray
    seed: int
    stream: int = 0

    def __post_init__(self) -> None:
        t = np.array(self.t_grid, dtype=float)
        x = np.array(self.values, dtype=float)
        if t.ndim != 1 or t.shape != x.shape or t.size < 2:
            raise DomainError("t_grid and values must be 1-d with equal length >= 2")
        if t[0] != 0.0:
            raise DomainError("t_grid must start at 0")
        steps = np.diff(t)
        if np.any(steps <= 0) or not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
            raise DomainError("t_grid must be increasing with a uniform step")
        if not math.isfinite(x[0]):
            raise DomainError("initial value must be finite")
        t.setflags(write=False)
        x.setflags(write=False)
        object.__setattr__(self, "t_grid", t)
        object.__setattr__(self, "values", x)

    @property
    def dt(self) -> float:
        return float(self.t_grid[-1] / (self.t_grid.size - 1))

    @property
    def horizon(self) -> float:
        return float(self.t_grid[-1])

    @property
    def n_steps(self) -> int:
        return self.t_grid.size - 1


@dataclass(frozen=True)
class LocalTimeField:
    levels: np.ndarray
    bandwidth: float
    l_values: np.ndarray
    t_end: float

    @property
    def spacing(self) -> float:
        return float(self.levels[1] - self.levels[0]) if self.levels.size > 1 else 0.0

    def mass(self) -> float:
        """Riemann sum of the field over its levels."""
        return float(np.sum(self.l_values) * self.spacing)

    def value_at(self, a: float) -> float:
        lv = self.levels
        if not lv[0] <= a <= lv[-1]:
            raise DomainError(f"level {a!r} is outside the field [{lv[0]}, {lv[-1]}]")
        return float(np.interp(a, lv, self.l_values))


@dataclass(frozen=True)
class MCResult:
    mean: float
    stderr: float
    n_paths: int
    seed: int


# -- simulation ----------------------------------------------------------------


def _increments(p: StableParams, dt: float, n_steps: int, seed: int, stream: int) -> np.ndarray:
    rng = make_rng(seed, stream)
    return dt ** (1.0 / p.alpha) * sample_standard(p, rng, n_steps)


def _check_steps(horizon: float, n_steps: int) -> None:
    if not (math.isfinite(horizon) and horizon > 0):
        raise DomainError("horizon must be positive")
    if int(n_steps) != n_steps or n_steps < 1:
        raise DomainError("n_steps must be a positive integer")


def simulate_path(
    p: StableParams, horizon: float, n_steps: int, x0: float, seed: int, stream: int = 0
) -> PathSample:
    _check_steps(horizon, n_steps)
    dt = horizon / n_steps
    inc = _increments(p, dt, n_steps, seed, stream)
    values = np.cumsum(np.concatenate(([float(x0)], inc)))
    t = dt * np.arange(n_steps + 1)
    return PathSample(t, values, int(seed), int(stream))


def simulate_paths(
    p: StableParams,
    horizon: float,
    n_steps: int,
    x0: float,
    base_seed: int,
    streams,
) -> np.ndarray:
    """Rows are the paths of :func:`simulate_path` for each stream id."""
    _check_steps(horizon, n_steps)
    dt = horizon / n_steps
    streams = list(streams)
    out = np.empty((len(streams), n_steps + 1))
    out[:, 0] = float(x0)
    for row, s in enumerate(streams):
        out[row, 1:] = _increments(p, dt, n_steps, base_seed, s)
    return np.cumsum(out, axis=1)


# -- local time ----------------------------------------------------------------


def default_bandwidth(alpha: float, dt: float, level_spacing: float = 0.0) -> float:
    """``max(dt ** (1 / alpha), 2 * level_spacing)``."""
    return max(dt ** (1.0 / alpha), 2.0 * level_spacing)


def level_grid(values, spacing: float, bandwidth: float) -> np.ndarray:
    """Levels on multiples of ``spacing`` covering the path range plus the kernel."""
    lo = math.floor((np.min(values) - bandwidth) / spacing) - 1
    hi = math.ceil((np.max(values) + bandwidth) / spacing) + 1
    return spacing * np.arange(lo, hi + 1)


def occupation_local_time(path: PathSample, levels, bandwidth: float) -> LocalTimeField:
    r"""Box-kernel estimate :math:`\hat L^a = (2\varepsilon)^{-1}\sum_k dt\,1\{-\varepsilon < X_k - a \le \varepsilon\}`.

    The half-open window keeps the occupation mass exact when path values sit
    on the level lattice.
    """
    levels = np.asarray(levels, dtype=float)
    if levels.size == 0:
        raise DomainError("empty level grid")
    if levels.size > 2:
        d = np.diff(levels)
        if np.any(d <= 0) or not np.allclose(d, d[0], rtol=1e-9, atol=0.0):
            raise DomainError("levels must be increasing and uniform")
    dt = path.dt
    if not bandwidth > 0:
        raise DomainError("bandwidth must be positive")
    xs = np.sort(path.values[:-1])
    counts = np.searchsorted(xs, levels + bandwidth, "right") - np.searchsorted(
        xs, levels - bandwidth, "right"
    )
    lvals = counts * (dt / (2.0 * bandwidth))
    levels.setflags(write=False)
    lvals.setflags(write=False)
    return LocalTimeField(levels, float(bandwidth), lvals, path.horizon)


def _local_time_rows(paths: np.ndarray, dt: float, a: float, eps: float) -> np.ndarray:
    d = paths[:, :-1] - a
    hits = (d > -eps) & (d <= eps)
    return hits.sum(axis=1) * (dt / (2.0 * eps))


def _occupation_mass_rows(paths: np.ndarray, dt: float, eps: float, spacing: float) -> np.ndarray:
    # mass of the field on the level grid spacing * Z, which covers every path
    x = paths[:, :-1]
    # levels a with x - eps <= a < x + eps
    counts = np.ceil((x + eps) / spacing) - np.ceil((x - eps) / spacing)
    return counts.sum(axis=1) * (dt * spacing / (2.0 * eps))


# -- residuals -----------------------------------------------------------------


def _tanaka_rows(p, paths, dt, a, eps):
    lt = _local_time_rows(paths, dt, a, eps)
    return tanaka_F(p, paths[:, -1] - a) - tanaka_F(p, paths[:, 0] - a) - lt


def _meyer_ito_rows(p, paths, dt, mu: SignedMeasure, eps):
    f_end = class_C_eval(p, mu, paths[:, -1])
    f_start = class_C_eval(p, mu, paths[:, 0])
    acc = np.zeros(paths.shape[0])
    for loc, w in mu.atoms:
        acc += w * _local_time_rows(paths, dt, loc, eps)
    return f_end - f_start - acc


def _drift_rows(p, paths, dt, x, gamma_):
    pc = power_constants(p, gamma_)
    y = paths[:, :-1] - x
    weight = np.where(y > 0, pc.k_plus, pc.k_minus)
    dist = np.maximum(np.abs(y), DRIFT_CLAMP)
    return dt * np.sum(weight * dist ** (gamma_ - p.alpha), axis=1)


def _power_rows(p, paths, dt, x, gamma_):
    drift = _drift_rows(p, paths, dt, x, gamma_)
    end = np.abs(paths[:, -1] - x) ** gamma_
    start = np.abs(paths[:, 0] - x) ** gamma_
    return end - start - drift, drift


def tanaka_residual(p: StableParams, path: PathSample, a: float, lt: LocalTimeField) -> float:
    """``F(X_t - a) - F(X_0 - a) - L_t^a``."""
    la = lt.value_at(a)
    x = path.values
    return float(tanaka_F(p, x[-1] - a) - tanaka_F(p, x[0] - a) - la)


def meyer_ito_residual(
    p: StableParams, path: PathSample, mu: SignedMeasure, lt: LocalTimeField
) -> float:
    """``f(X_t) - f(X_0) - sum_i w_i L_t^{a_i}`` with ``f = F * mu``."""
    if mu.density is not None:
        raise DomainError("the Meyer-Itô check needs a purely atomic measure")
    lv = lt.levels
    if mu.locations.size and (mu.locations.min() < lv[0] or mu.locations.max() > lv[-1]):
        raise DomainError("an atom lies outside the level grid")
    x = path.values
    acc = sum(w * lt.value_at(a) for a, w in mu.atoms)
    return float(class_C_eval(p, mu, x[-1]) - class_C_eval(p, mu, x[0]) - acc)


def power_drift(p: StableParams, path: PathSample, x: float, gamma_: float) -> float:
    """Left-point sum of ``|X - x|^(gamma - alpha)`` weighted by ``k_plus`` above ``x`` and ``k_minus`` below."""
    return float(_drift_rows(p, path.values[None, :], path.dt, x, gamma_)[0])


def power_residual(p: StableParams, path: PathSample, x: float, gamma_: float) -> float:
    res, _ = _power_rows(p, path.values[None, :], path.dt, x, gamma_)
    return float(res[0])


# -- Monte Carlo ---------------------------------------------------------------


@dataclass(frozen=True)
class EstimatorSpec:
    """What to estimate and how the paths are generated.

    ``kind`` is ``"tanaka"`` (level ``level``), ``"meyer-ito"`` (atoms of
    ``measure``) or ``"power"`` (centre ``level``, exponent ``gamma``).
    The default bandwidth is ``dt ** (1 / alpha)`` with level spacing half of
    it, so the occupation mass is conserved exactly on the level grid.
    """

    kind: str
    params: StableParams
    horizon: float = 1.0
    n_steps: int = 1000
    x0: float = 0.5
    level: float = 0.0
    gamma: float | None = None
    measure: SignedMeasure | None = None
    bandwidth: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("tanaka", "meyer-ito", "power"):
            raise DomainError(f"unknown estimator kind {self.kind!r}")
        if self.kind == "power" and self.gamma is None:
            raise DomainError("the power estimator needs gamma")
        if self.kind == "meyer-ito" and self.measure is None:
            raise DomainError("the Meyer-Itô estimator needs a measure")
        _check_steps(self.horizon, self.n_steps)

    @property
    def dt(self) -> float:
        return self.horizon / self.n_steps

    @property
    def eps(self) -> float:
        if self.bandwidth is not None:
            return float(self.bandwidth)
        return self.dt ** (1.0 / self.params.alpha)

    @property
    def level_spacing(self) -> float:
        return 0.5 * self.eps


@dataclass(frozen=True)
class ResidualBatch:
    residuals: np.ndarray
    #: occupation mass per path (local-time estimators only)
    occupation: np.ndarray | None
    #: drift per path (power estimator only)
    drift: np.ndarray | None


def residual_samples(spec: EstimatorSpec, n_paths: int, base_seed: int) -> ResidualBatch:
    """Per-path residuals for paths ``0, ..., n_paths - 1`` of ``base_seed``."""
    if int(n_paths) != n_paths or n_paths < 1:
        raise DomainError("n_paths must be a positive integer")
    p = spec.params
    res = np.empty(n_paths)
    occ = np.empty(n_paths) if spec.kind != "power" else None
    drift = np.empty(n_paths) if spec.kind == "power" else None
    for start in range(0, n_paths, _CHUNK):
        idx = range(start, min(start + _CHUNK, n_paths))
        sl = slice(idx.start, idx.stop)
        paths = simulate_paths(p, spec.horizon, spec.n_steps, spec.x0, base_seed, idx)
        if spec.kind == "tanaka":
            res[sl] = _tanaka_rows(p, paths, spec.dt, spec.level, spec.eps)
        elif spec.kind == "meyer-ito":
            res[sl] = _meyer_ito_rows(p, paths, spec.dt, spec.measure, spec.eps)
        else:
            res[sl], drift[sl] = _power_rows(p, paths, spec.dt, spec.level, spec.gamma)
        if occ is not None:
            occ[sl] = _occupation_mass_rows(paths, spec.dt, spec.eps, spec.level_spacing)
    return ResidualBatch(res, occ, drift)


def summarize(samples: np.ndarray, seed: int) -> MCResult:
    n = samples.size
    if n < 2:
        raise DomainError("need at least 2 samples")
    return MCResult(
        float(np.mean(samples)), float(np.std(samples, ddof=1) / math.sqrt(n)), n, int(seed)
    )


def mc_run(spec: EstimatorSpec, n_paths: int, base_seed: int) -> MCResult:
    if n_paths < 2:
        raise DomainError("n_paths must be at least 2")
    return summarize(residual_samples(spec, n_paths, base_seed).residuals, base_seed)
