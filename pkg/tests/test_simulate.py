import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from stablefrac import (
    DomainError,
    EstimatorSpec,
    LocalTimeField,
    PathSample,
    SignedMeasure,
    StableParams,
    char_exponent,
    critical_beta,
    default_bandwidth,
    level_grid,
    mc_run,
    meyer_ito_residual,
    occupation_local_time,
    power_constants,
    power_drift,
    power_residual,
    residual_samples,
    simulate_path,
    simulate_paths,
    tanaka_F,
    tanaka_residual,
    to_skew_scale,
)

P = StableParams(1.5, 1.0, 2.0)


def _field(path, alpha):
    eps = path.dt ** (1.0 / alpha)
    return occupation_local_time(path, level_grid(path.values, 0.5 * eps, eps), eps)


# -- paths ---------------------------------------------------------------------


def test_path_shape_and_start():
    path = simulate_path(P, 2.0, 40, 0.3, seed=5)
    assert path.values.shape == path.t_grid.shape == (41,)
    assert path.values[0] == 0.3
    assert path.t_grid[-1] == 2.0
    assert path.dt == pytest.approx(0.05)
    assert path.n_steps == 40


def test_same_seed_same_path():
    a = simulate_path(P, 1.0, 100, 0.0, seed=9, stream=2)
    b = simulate_path(P, 1.0, 100, 0.0, seed=9, stream=2)
    c = simulate_path(P, 1.0, 100, 0.0, seed=9, stream=3)
    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, c.values)


def test_batch_rows_match_single_paths():
    rows = simulate_paths(P, 1.0, 50, 0.2, 4, range(3, 6))
    for i, stream in enumerate(range(3, 6)):
        assert np.array_equal(rows[i], simulate_path(P, 1.0, 50, 0.2, 4, stream).values)


@pytest.mark.parametrize("n_steps", [1, 10])
def test_terminal_value_law(n_steps):
    n = 10_000
    x1 = simulate_paths(P, 1.0, n_steps, 0.0, 21, range(n))[:, -1]
    for u in (0.5, 1.0, 2.0):
        err = abs(np.mean(np.exp(1j * u * x1)) - np.exp(char_exponent(P, u)))
        assert err <= 4.0 / math.sqrt(n)


def test_invalid_path_arguments():
    with pytest.raises(DomainError):
        simulate_path(P, 1.0, 0, 0.0, 1)
    with pytest.raises(DomainError):
        simulate_path(P, -1.0, 10, 0.0, 1)
    with pytest.raises(DomainError):
        simulate_path(P, 1.0, 10, math.nan, 1)


# -- local time ----------------------------------------------------------------


def test_constant_path_local_time():
    t = np.linspace(0.0, 2.0, 201)
    path = PathSample(t, np.full(201, 0.4), seed=0)
    eps = 0.05
    levels = 0.4 + 0.04 * np.arange(-5, 6)
    lt = occupation_local_time(path, levels, eps)
    near = np.abs(levels - 0.4) < eps
    assert np.allclose(lt.l_values[near], 2.0 / (2 * eps), rtol=1e-12)
    assert np.all(lt.l_values[np.abs(levels - 0.4) > eps] == 0.0)


def test_occupation_mass_conserved():
    for stream in range(10):
        path = simulate_path(P, 1.0, 1000, 0.0, 31, stream)
        assert _field(path, P.alpha).mass() == pytest.approx(1.0, rel=1e-9)


def test_occupation_formula_for_quadratic():
    for stream in range(10):
        path = simulate_path(P, 1.0, 1000, 0.0, 32, stream)
        lt = _field(path, P.alpha)

        def f(x):
            return np.minimum(x * x, 4.0)

        direct = path.dt * np.sum(f(path.values[:-1]))
        via_levels = np.sum(f(lt.levels) * lt.l_values) * lt.spacing
        assert via_levels == pytest.approx(direct, rel=0.03)


def test_local_time_validation():
    path = simulate_path(P, 1.0, 10, 0.0, 1)
    with pytest.raises(DomainError):
        occupation_local_time(path, np.array([0.0, 0.1, 0.3]), 0.1)
    with pytest.raises(DomainError):
        occupation_local_time(path, np.array([0.0]), 0.0)
    lt = occupation_local_time(path, np.array([0.0, 0.1]), 0.1)
    with pytest.raises(DomainError):
        lt.value_at(5.0)


def test_default_bandwidth():
    assert default_bandwidth(1.5, 1e-3) == pytest.approx(1e-2)
    assert default_bandwidth(1.5, 1e-3, 0.02) == pytest.approx(0.04)


@settings(max_examples=30, deadline=None)
@given(st.floats(1.1, 1.9), st.integers(0, 10_000))
def test_local_time_nonnegative_and_conserving(a, stream):
    p = StableParams(a, 1.0, 1.0)
    path = simulate_path(p, 1.0, 200, 0.0, 40, stream)
    lt = _field(path, a)
    assert np.all(lt.l_values >= 0)
    assert lt.mass() == pytest.approx(1.0, rel=1e-9)


# -- residuals on single paths -------------------------------------------------


def test_tanaka_residual_away_from_level():
    t = np.linspace(0.0, 1.0, 4)
    path = PathSample(t, np.array([1.0, 1.5, 2.0, 3.0]), seed=0)
    lt = occupation_local_time(path, np.linspace(-1.0, 4.0, 51), 0.1)
    expected = tanaka_F(P, 3.0) - tanaka_F(P, 1.0)
    assert tanaka_residual(P, path, 0.0, lt) == pytest.approx(expected, rel=1e-15)


def test_meyer_ito_single_atom_is_tanaka():
    path = simulate_path(P, 1.0, 500, 0.2, 41)
    lt = _field(path, P.alpha)
    a = float(lt.levels[len(lt.levels) // 2])
    mu = SignedMeasure(((a, 1.0),))
    assert meyer_ito_residual(P, path, mu, lt) == pytest.approx(tanaka_residual(P, path, a, lt), rel=1e-13)


@given(st.floats(-4.0, 4.0))
@settings(max_examples=20, deadline=None)
def test_meyer_ito_linear_in_measure(lam):
    path = simulate_path(P, 1.0, 300, 0.0, 42)
    lt = occupation_local_time(path, np.linspace(-20.0, 20.0, 4001), 0.02)
    mu = SignedMeasure(((-1.0, 1.0), (0.5, 2.0)))
    base = meyer_ito_residual(P, path, mu, lt)
    assert meyer_ito_residual(P, path, mu.scaled(lam), lt) == pytest.approx(lam * base, rel=1e-12, abs=1e-12)


def test_meyer_ito_rejects_atoms_off_grid():
    path = simulate_path(P, 1.0, 10, 0.0, 1)
    lt = occupation_local_time(path, np.linspace(-1, 1, 21), 0.1)
    with pytest.raises(DomainError):
        meyer_ito_residual(P, path, SignedMeasure(((5.0, 1.0),)), lt)


def test_power_bookkeeping_two_steps():
    g = 1.2
    path = PathSample(np.array([0.0, 0.5, 1.0]), np.array([0.3, -0.8, 1.1]), seed=0)
    pc = power_constants(P, g)
    drift = 0.5 * (pc.k_plus * 0.3 ** (g - 1.5) + pc.k_minus * 0.8 ** (g - 1.5))
    assert power_drift(P, path, 0.0, g) == pytest.approx(drift, rel=1e-14)
    expected = 1.1**g - 0.3**g - drift
    assert power_residual(P, path, 0.0, g) == pytest.approx(expected, rel=1e-14)


def test_drift_nonnegative_above_beta_symmetric():
    p = StableParams(1.6, 1.0, 1.0)
    for g in (0.6 + 1e-6, 0.9, 1.5):
        for stream in range(20):
            path = simulate_path(p, 1.0, 500, 0.1, 43, stream)
            assert power_drift(p, path, 0.0, g) >= 0


def test_drift_sign_varies_below_beta():
    p = StableParams(1.3, 1.0, 5.0)
    g = 0.5 * (0.3 + critical_beta(p).beta_crit)
    drift = residual_samples(EstimatorSpec("power", p, gamma=g, n_steps=200, x0=0.5), 400, 44).drift
    assert np.any(drift > 0) and np.any(drift < 0)


# -- Monte Carlo ---------------------------------------------------------------


def test_mc_run_deterministic_and_minimal():
    spec = EstimatorSpec("tanaka", P, n_steps=50)
    assert mc_run(spec, 200, 1) == mc_run(spec, 200, 1)
    r = mc_run(spec, 2, 1)
    assert r.n_paths == 2 and r.seed == 1 and r.stderr >= 0


def test_stderr_scales_like_inverse_root_n():
    spec = EstimatorSpec("tanaka", P, n_steps=100)
    small = mc_run(spec, 2000, 2)
    large = mc_run(spec, 8000, 2)
    assert small.stderr / large.stderr == pytest.approx(2.0, rel=0.2)


def test_mc_stderr_definition():
    spec = EstimatorSpec("tanaka", P, n_steps=50)
    batch = residual_samples(spec, 300, 3)
    r = mc_run(spec, 300, 3)
    assert r.mean == pytest.approx(np.mean(batch.residuals))
    assert r.stderr == pytest.approx(np.std(batch.residuals, ddof=1) / math.sqrt(300))


def test_estimator_spec_validation():
    with pytest.raises(DomainError):
        EstimatorSpec("power", P)
    with pytest.raises(DomainError):
        EstimatorSpec("meyer-ito", P)
    with pytest.raises(DomainError):
        EstimatorSpec("bogus", P)


def test_coupled_refinement_shrinks_discretization_error():
    # residuals of the same paths, subsampled to coarser grids, approach the finest one
    p = StableParams(1.5, 1.0, 2.0)
    fine = simulate_paths(p, 1.0, 6400, 0.5, 45, range(400))

    def residuals(step):
        out = []
        for row in fine:
            v = row[::step]
            path = PathSample(np.linspace(0.0, 1.0, v.size), v, 45)
            eps = path.dt ** (1.0 / p.alpha)
            lt = occupation_local_time(path, np.array([-eps, 0.0, eps]), eps)
            out.append(tanaka_residual(p, path, 0.0, lt))
        return np.array(out)

    ref = residuals(1)
    spread = [np.var(residuals(step) - ref) for step in (256, 64, 16)]
    assert spread[0] > spread[1] > spread[2]


@pytest.mark.slow
def test_tanaka_martingale_mean_zero():
    r = mc_run(EstimatorSpec("tanaka", P, x0=0.5), 10_000, 20240101)
    assert abs(r.mean) <= 3 * r.stderr


@pytest.mark.slow
def test_tanaka_mirror_symmetry():
    p = StableParams(1.5, 1.0, 1.0)
    a = mc_run(EstimatorSpec("tanaka", p, x0=0.5, level=0.3), 10_000, 20240101)
    b = mc_run(EstimatorSpec("tanaka", p, x0=-0.5, level=-0.3), 10_000, 20240102)
    assert abs(a.mean - b.mean) <= 3 * math.hypot(a.stderr, b.stderr)


def _exact_abs_moment(p, shift, g):
    """``E|shift + X_1|^g`` for ``0 < g < min(alpha, 2)`` from the characteristic function."""

    def integrand(u):
        cf = np.exp(1j * u * shift + char_exponent(p, u))
        return (1.0 - cf.real) / u ** (1.0 + g)

    half = sum(
        integrate.quad(integrand, lo, hi, limit=500)[0]
        for lo, hi in ((0, 1), (1, 10), (10, 100), (100, np.inf))
    )
    return 2.0 * math.gamma(1 + g) * math.sin(math.pi * g / 2) / math.pi * half


def test_exact_abs_moment_formula():
    p = StableParams(1.5, 1.0, 1.0)
    sigma = to_skew_scale(p).sigma
    closed = 2.0 * math.gamma(1 - 1 / 1.5) * sigma ** (1 / 1.5) / math.pi
    assert _exact_abs_moment(p, 0.0, 1.0) == pytest.approx(closed, rel=1e-10)


@pytest.mark.slow
def test_power_decomposition_in_expectation():
    # E|X_1 - x|^g - |X_0 - x|^g = E[drift], with the heavy-tailed terminal term
    # replaced by its exact value
    p = StableParams(1.5, 1.0, 3.0)
    g, x0 = 1.2, 0.5
    drift = residual_samples(EstimatorSpec("power", p, x0=x0, gamma=g), 10_000, 20240101).drift
    gap = _exact_abs_moment(p, x0, g) - x0**g - np.mean(drift)
    assert abs(gap) <= 3 * np.std(drift, ddof=1) / math.sqrt(drift.size)


@pytest.mark.slow
@pytest.mark.xfail(
    strict=True,
    reason="|X_1|^1.2 has infinite variance at alpha=1.5 (tail index 1.25), so the "
    "3-stderr rule does not control this t-statistic; see the exact-moment test",
)
def test_power_martingale_mean_zero():
    p = StableParams(1.5, 1.0, 3.0)
    r = mc_run(EstimatorSpec("power", p, x0=0.5, gamma=1.2), 10_000, 20240101)
    assert abs(r.mean) <= 3 * r.stderr


def test_local_time_field_container():
    lt = LocalTimeField(np.array([0.0, 0.5, 1.0]), 0.5, np.array([0.0, 1.0, 0.0]), 1.0)
    assert lt.spacing == 0.5
    assert lt.mass() == 0.5
    assert lt.value_at(0.25) == 0.5
