"""Numerical verification suites.

Each check returns :class:`Check` rows ``(name, value, tolerance, passed)``.
The command line ``verify`` subcommand and the acceptance tests both run these.
Random inputs come from fixed seeds, so every run is reproducible.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import binom

from stablefrac.fracops import (
    SampleGrid,
    Side,
    crossed_compose_coeffs,
    frac_op,
    lizorkin_test,
    spectral_multiplier,
    to_grid,
)
from stablefrac.generator import (
    StableParams,
    apply_generator,
    generator_on_power,
    invert_generator,
    symbol,
)
from stablefrac.stablelaw import char_exponent, make_rng, sample_standard
from stablefrac.tanaka import (
    MartingaleClass,
    SignedMeasure,
    classify,
    critical_beta,
    h_functions,
    power_constants,
)
from stablefrac.simulate import EstimatorSpec, residual_samples, summarize

DEFAULT_SEED = 20240101


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tolerance: float
    passed: bool
    detail: str = ""


def _le(name: str, value: float, tol: float, detail: str = "") -> Check:
    value = float(value)
    return Check(name, value, tol, bool(value <= tol), detail)


def _central(n: int) -> slice:
    return slice(n // 4, 3 * n // 4)


def _rel_sup(a: np.ndarray, b: np.ndarray, sl: slice | None = None) -> float:
    if sl is not None:
        a, b = a[sl], b[sl]
    return float(np.max(np.abs(a - b)) / np.max(np.abs(b)))


# test functions: (vanish_order, center, width, shift, phase)
TEST_FUNCTIONS = (
    (2, 1.0, 1.4, 0.0, 0.0),
    (2, 0.6, 0.8, 3.0, 0.4),
    (1, 0.8, 1.0, -5.0, 1.1),
    (3, 1.5, 2.0, 1.5, -0.7),
    (2, 1.2, 0.6, -2.0, 2.0),
)


def _test_function(grid: SampleGrid, spec) -> tuple:
    p, c, w, shift, phase = spec
    s = lizorkin_test(p, c, w, grid, shift=shift, phase=phase)
    return s, to_grid(s)


def random_params(rng: np.random.Generator, alpha: float) -> StableParams:
    cm, cp = rng.uniform(0.0, 3.0, 2)
    if rng.uniform() < 0.2:
        # one-sided cases
        cm = 0.0
    return StableParams(alpha, cm, cp if cp > 0 else 1.0)


# -- deterministic checks ------------------------------------------------------


def check_inversion(seed: int = DEFAULT_SEED, n_params: int = 20) -> list[Check]:
    """Round trips ``G(Lf)`` and ``L(Gf)`` on test functions, both methods."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    alphas = (0.4, 0.7, 1.3, 1.7)
    grid = SampleGrid(2**14, 0.05)
    funcs = [_test_function(grid, spec) for spec in TEST_FUNCTIONS]
    cm = _central(grid.n)
    spec_err = quad_err = 0.0
    for i in range(n_params):
        p = random_params(rng, alphas[i % len(alphas)])
        for s, f in funcs:
            ref = f.values
            gl = invert_generator(p, apply_generator(p, s, "spectral"), "spectral")
            lg = apply_generator(p, invert_generator(p, s, "spectral"), "spectral")
            spec_err = max(
                spec_err,
                _rel_sup(to_grid(gl).values, ref),
                _rel_sup(to_grid(lg).values, ref),
            )
            gl_q = invert_generator(p, apply_generator(p, f, "quadrature"), "quadrature")
            lg_q = apply_generator(p, invert_generator(p, f, "quadrature"), "quadrature")
            scale = np.max(np.abs(ref))
            quad_err = max(
                quad_err,
                float(np.max(np.abs(gl_q.values[cm] - ref[cm])) / scale),
                float(np.max(np.abs(lg_q.values[cm] - ref[cm])) / scale),
            )
    elapsed = time.perf_counter() - t0
    return [
        _le("inversion spectral round trip", spec_err, 1e-10),
        _le("inversion quadrature round trip (central half)", quad_err, 1e-3),
        _le("inversion runtime [s]", elapsed, 30.0),
    ]


def check_crossed_composition(seed: int = DEFAULT_SEED) -> list[Check]:
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    worst = 0.0
    done = 0
    while done < 100:
        lam, mu = rng.uniform(-1.9, 1.9, 2)
        if abs(lam + mu - round(lam + mu)) < 0.02:
            continue
        u = rng.choice([-1.0, 1.0]) * 10 ** rng.uniform(-2, 2)
        a_minus, a_plus = crossed_compose_coeffs(lam, mu)
        lhs = spectral_multiplier(lam, Side.Right, u) * spectral_multiplier(mu, Side.Left, u)
        rhs = a_minus * spectral_multiplier(lam + mu, Side.Left, u) + a_plus * spectral_multiplier(
            lam + mu, Side.Right, u
        )
        worst = max(worst, abs(lhs - rhs) / abs(lhs))
        done += 1
    grid = SampleGrid(2**15, 0.025)
    cm = _central(grid.n)
    grid_worst = 0.0
    for spec in TEST_FUNCTIONS[:2]:
        _, f = _test_function(grid, spec)
        for lam, mu in ((0.3, 0.4), (0.6, -0.3), (-0.4, 0.7), (0.5, 0.8), (-0.3, -0.45), (0.9, -0.6)):
            a_minus, a_plus = crossed_compose_coeffs(lam, mu)
            lhs = frac_op(frac_op(f, mu, Side.Left), lam, Side.Right).values
            rhs = a_minus * frac_op(f, lam + mu, Side.Left).values + a_plus * frac_op(
                f, lam + mu, Side.Right
            ).values
            grid_worst = max(grid_worst, _rel_sup(lhs, rhs, cm))
    return [
        _le("crossed composition, multipliers", worst, 1e-12),
        _le("crossed composition, grid (central half)", grid_worst, 1e-3),
        _le("crossed composition runtime [s]", time.perf_counter() - t0, 5.0),
    ]


def _taylor_remainder(t: np.ndarray, g: float) -> np.ndarray:
    """``|1 + t|^g - 1 - g t`` without cancellation for small ``t``."""
    t = np.asarray(t, dtype=float)
    out = np.abs(1.0 + t) ** g - 1.0 - g * t
    small = np.abs(t) < 0.05
    if np.any(small):
        ts = t[small]
        k = np.arange(2, 16)
        out[small] = np.sum(binom(g, k)[None, :] * ts[:, None] ** k[None, :], axis=1)
    return out


def power_image_by_quadrature(p: StableParams, g: float, x: float) -> float:
    r"""Direct quadrature of :math:`L|\cdot|^\gamma(x)` against the Lévy measure."""
    ax = abs(x)
    total = 0.0
    for c, direction in ((p.c_plus, 1.0), (p.c_minus, -1.0)):
        if c == 0:
            continue

        def integrand(h, direction=direction):
            t = direction * h / x
            return float(_taylor_remainder(np.array([t]), g)[0]) * h ** (-1.0 - p.alpha)

        pieces = ((0.0, 0.5 * ax), (0.5 * ax, ax), (ax, 2.0 * ax), (2.0 * ax, np.inf))
        acc = 0.0
        for lo, hi in pieces:
            acc += integrate.quad(integrand, lo, hi, limit=200, epsabs=0.0, epsrel=1e-12)[0]
        total += c * acc
    return ax**g * total


TRIANGLE_CASES = tuple(
    (a, a - 1.0 + frac * 1.0, cm, cp)
    for a, frac in ((1.2, 0.65), (1.5, 0.7), (1.8, 0.6))
    for cm, cp in ((1.0, 1.0), (1.0, 3.0), (2.0, 0.5), (0.0, 1.0))
)


def check_constant_triangle() -> list[Check]:
    t0 = time.perf_counter()
    closed = 0.0
    quad_worst = 0.0
    for a, g, cm, cp in TRIANGLE_CASES:
        p = StableParams(a, cm, cp)
        pc = power_constants(p, g)
        imgs = [generator_on_power(p, g, b) for b in Side]
        via_kplus = sum(im.coef_plus for im in imgs)
        via_kminus = sum(im.coef_minus for im in imgs)
        closed = max(
            closed,
            abs(via_kplus - pc.k_plus) / abs(pc.k_plus),
            abs(via_kminus - pc.k_minus) / abs(pc.k_minus),
        )
        for x in (-2.0, -1.0, -0.5, 0.5, 1.0, 2.0):
            k = pc.k_plus if x > 0 else pc.k_minus
            expected = k * abs(x) ** (g - a)
            got = power_image_by_quadrature(p, g, x)
            quad_worst = max(quad_worst, abs(got - expected) / abs(expected))
    return [
        _le("power constants vs generator on powers", closed, 1e-12),
        _le("power constants vs direct jump quadrature", quad_worst, 1e-4),
        _le("constant triangle runtime [s]", time.perf_counter() - t0, 60.0),
    ]


def asymmetric_cases(seed: int = DEFAULT_SEED, n: int = 20) -> list[StableParams]:
    rng = np.random.default_rng(seed + 4)
    return [
        StableParams(float(rng.uniform(1.05, 1.95)), float(rng.uniform(0.02, 0.95)), 1.0)
        for _ in range(n)
    ]


def check_critical_exponent(seed: int = DEFAULT_SEED) -> list[Check]:
    worst = 0.0
    pattern_bad = 0
    flip_bad = 0
    for p in asymmetric_cases(seed):
        beta = critical_beta(p).beta_crit
        worst = max(worst, abs(power_constants(p, beta).k_plus))
        grid = p.alpha - 1.0 + (np.arange(200) + 0.5) / 200.0
        for g in grid:
            if abs(g - beta) < 1e-8:
                continue
            pc = power_constants(p, g)
            ok = pc.k_minus > 0 and (pc.k_plus < 0 if g < beta else pc.k_plus > 0)
            pattern_bad += not ok
        below = power_constants(p, beta - 1e-8).k_plus
        above = power_constants(p, beta + 1e-8).k_plus
        flip_bad += not (below < 0 < above)
    return [
        _le("|k_plus| at the critical exponent", worst, 1e-10),
        _le("sign pattern violations on gamma grid", pattern_bad, 0),
        _le("sign flip violations at beta +- 1e-8", flip_bad, 0),
    ]


def check_symmetric_case() -> list[Check]:
    worst = 0.0
    bad = 0
    for a in np.linspace(1.05, 1.95, 19):
        for c in (0.5, 1.0, 3.0):
            p = StableParams(float(a), c, c)
            worst = max(worst, abs(critical_beta(p).beta_crit - (a - 1.0)))
            for g in a - 1.0 + (np.arange(200) + 0.5) / 200.0:
                bad += classify(p, float(g)) is not MartingaleClass.Submartingale
    return [
        _le("symmetric critical exponent minus (alpha - 1)", worst, 1e-12),
        _le("symmetric gammas not classified submartingale", bad, 0),
    ]


def check_identities(seed: int = DEFAULT_SEED) -> list[Check]:
    rng = np.random.default_rng(seed + 6)
    lam, mu = rng.uniform(-2.0, 2.0, (2, 10_000))
    lhs = np.cos((lam - mu) * np.pi / 2) * np.sin((lam + mu) * np.pi / 2)
    rhs = np.sin(mu * np.pi / 2) * np.cos(mu * np.pi / 2) + np.sin(lam * np.pi / 2) * np.cos(
        lam * np.pi / 2
    )
    trig = float(np.max(np.abs(lhs - rhs)))
    period = 0.0
    for _ in range(1000):
        p = StableParams(float(rng.uniform(1.05, 1.95)), float(rng.uniform(0, 1)), float(rng.uniform(0.05, 1)))
        g = float(rng.uniform(-3.0, 3.0))
        h0 = h_functions(p, g)
        h2 = h_functions(p, g + 2.0)
        period = max(period, abs(h0[0] - h2[0]), abs(h0[1] - h2[1]))
    return [
        _le("trigonometric product identity", trig, 1e-13),
        _le("period-2 of the sign functions", period, 1e-13),
    ]


def check_symbol(seed: int = DEFAULT_SEED) -> list[Check]:
    rng = np.random.default_rng(seed + 7)
    worst = 0.0
    max_re = -np.inf
    for _ in range(100):
        a = float(rng.uniform(0.05, 1.95))
        if abs(a - 1.0) < 0.01:
            a += 0.02
        p = StableParams(a, float(rng.uniform(0, 3)), float(rng.uniform(0.01, 3)))
        u = float(rng.choice([-1.0, 1.0]) * 10 ** rng.uniform(-3, 3))
        psi = symbol(p, u)
        ce = char_exponent(p, u)
        worst = max(worst, abs(psi - ce) / abs(ce))
        max_re = max(max_re, psi.real)
    return [
        _le("symbol vs characteristic exponent", worst, 1e-12),
        _le("largest real part of the symbol", max_re, 0.0),
    ]


SAMPLER_CASES = (
    StableParams(0.7, 1.0, 1.0),
    StableParams(0.7, 1.0, 5.0),
    StableParams(1.3, 1.0, 1.0),
    StableParams(1.3, 1.0, 5.0),
    StableParams(1.7, 1.0, 1.0),
    StableParams(1.7, 5.0, 1.0),
)


def check_sampler(seed: int = DEFAULT_SEED, n: int = 100_000) -> list[Check]:
    t0 = time.perf_counter()
    worst = 0.0
    for i, p in enumerate(SAMPLER_CASES):
        x = sample_standard(p, make_rng(seed, 10_000 + i), n)
        for u in (0.5, 1.0, 2.0):
            ecf = np.mean(np.exp(1j * u * x))
            worst = max(worst, abs(ecf - np.exp(char_exponent(p, u))))
    return [
        _le("empirical CF error times sqrt(n)", worst * math.sqrt(n), 4.0),
        _le("sampler runtime [s]", time.perf_counter() - t0, 60.0),
    ]


# -- Monte Carlo ---------------------------------------------------------------

MC_SETTINGS = tuple(
    StableParams(a, cm, cp) for a in (1.3, 1.7) for cm, cp in ((1.0, 1.0), (1.0, 5.0))
)
MEYER_ITO_MEASURE = SignedMeasure(((-1.0, 1.0), (1.0, 2.0)))


def balanced_gamma(alpha: float) -> float:
    """Exponent at which the two heavy tails of the power residual balance.

    The terminal value ``|X_t|^gamma`` has tail index ``alpha / gamma`` and a
    single drift term has tail index ``1 / (alpha - gamma)``; they are equal
    at ``gamma = alpha^2 / (1 + alpha)``.
    """
    return alpha * alpha / (1.0 + alpha)


def _label(p: StableParams) -> str:
    return f"alpha={p.alpha:g} c-={p.c_minus:g} c+={p.c_plus:g}"


def _mc_check(name: str, spec: EstimatorSpec, n_paths: int, seed: int, occupation: bool):
    batch = residual_samples(spec, n_paths, seed)
    r = summarize(batch.residuals, seed)
    z = abs(r.mean) / r.stderr
    rows = [
        Check(
            f"{name} |mean|/stderr [{_label(spec.params)}]",
            z,
            3.0,
            bool(z <= 3.0),
            f"mean={r.mean:.6g} stderr={r.stderr:.6g} n={r.n_paths} seed={seed}",
        )
    ]
    if occupation:
        dev = float(np.max(np.abs(batch.occupation / spec.horizon - 1.0)))
        rows.append(_le(f"{name} occupation mass deviation [{_label(spec.params)}]", dev, 0.02))
    return rows, batch


def check_tanaka(n_paths: int = 10_000, seed: int = DEFAULT_SEED) -> list[Check]:
    out = []
    for p in MC_SETTINGS:
        rows, _ = _mc_check("tanaka", EstimatorSpec("tanaka", p), n_paths, seed, True)
        out += rows
    return out


def check_meyer_ito(n_paths: int = 10_000, seed: int = DEFAULT_SEED) -> list[Check]:
    out = []
    for p in MC_SETTINGS:
        spec = EstimatorSpec("meyer-ito", p, measure=MEYER_ITO_MEASURE)
        rows, _ = _mc_check("meyer-ito", spec, n_paths, seed, True)
        out += rows
    return out


def check_power(n_paths: int = 10_000, seed: int = DEFAULT_SEED) -> list[Check]:
    out = []
    for p in MC_SETTINGS:
        spec = EstimatorSpec("power", p, gamma=balanced_gamma(p.alpha))
        rows, _ = _mc_check("power", spec, n_paths, seed, False)
        out += rows
    return out


def check_drift_sign(n_paths: int = 10_000, seed: int = DEFAULT_SEED) -> list[Check]:
    """Drift is nonnegative on every path once gamma is at least the critical exponent."""
    out = []
    for p in MC_SETTINGS:
        beta = critical_beta(p).beta_crit
        # just above beta: at beta itself k_plus is zero only up to rounding
        for g in (beta + 1e-6, 0.5 * (beta + p.alpha)):
            if not p.alpha - 1.0 < g < p.alpha:
                continue
            spec = EstimatorSpec("power", p, gamma=g)
            drift = residual_samples(spec, n_paths, seed).drift
            frac_neg = float(np.mean(drift < 0))
            out.append(_le(f"fraction of negative drifts, gamma={g:.4f} [{_label(p)}]", frac_neg, 0.0))
    return out


SUITES = {
    "identities": lambda n, seed: (
        check_crossed_composition(seed)
        + check_constant_triangle()
        + check_critical_exponent(seed)
        + check_symmetric_case()
        + check_identities(seed)
        + check_symbol(seed)
    ),
    "inversion": lambda n, seed: check_inversion(seed),
    "sampler": lambda n, seed: check_sampler(seed),
    "tanaka": lambda n, seed: check_tanaka(n, seed),
    "meyer-ito": lambda n, seed: check_meyer_ito(n, seed),
    "power": lambda n, seed: check_power(n, seed) + check_drift_sign(n, seed),
}


def run_suite(name: str, n_paths: int = 10_000, seed: int = DEFAULT_SEED) -> list[Check]:
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](n_paths, seed)
