import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from stablefrac import (
    DomainError,
    SkewScaleParams,
    StableParams,
    char_exponent,
    empirical_moment,
    from_skew_scale,
    levy_density,
    make_rng,
    sample_standard,
    symbol,
    to_skew_scale,
)
from stablefrac.stablelaw import ExpectedDivergenceWarning

N = 100_000

alphas = st.floats(0.05, 1.95).filter(lambda a: abs(a - 1.0) > 1e-3)
intensities = st.tuples(st.floats(0.0, 5.0), st.floats(0.0, 5.0)).filter(lambda c: c[0] + c[1] > 0.01)


def test_skew_scale_examples():
    assert to_skew_scale(StableParams(1.3, 2.0, 2.0)).beta_skew == 0.0
    assert to_skew_scale(StableParams(0.7, 0.0, 2.0)).beta_skew == 1.0
    s = to_skew_scale(StableParams(1.5, 1.0, 1.0))
    assert s.sigma == pytest.approx(2.0 * (4.0 * math.sqrt(math.pi) / 3.0) * (math.sqrt(2.0) / 2.0), rel=1e-14)


@pytest.mark.parametrize("p", [StableParams(1.3, 2.0, 2.0), StableParams(0.7, 0.0, 2.0), StableParams(1.5, 1.0, 1.0)])
def test_skew_scale_round_trip_examples(p):
    back = from_skew_scale(to_skew_scale(p))
    assert (back.alpha, back.c_minus, back.c_plus) == pytest.approx((p.alpha, p.c_minus, p.c_plus), rel=1e-12, abs=1e-15)


@given(alphas, intensities)
def test_skew_scale_round_trip(a, cs):
    p = StableParams(a, *cs)
    s = to_skew_scale(p)
    assert s.sigma > 0
    back = from_skew_scale(s)
    assert back.c_minus == pytest.approx(p.c_minus, rel=1e-12, abs=1e-12)
    assert back.c_plus == pytest.approx(p.c_plus, rel=1e-12, abs=1e-12)


def test_skew_scale_validation():
    with pytest.raises(DomainError):
        SkewScaleParams(1.5, 1.5, 1.0)
    with pytest.raises(DomainError):
        SkewScaleParams(1.5, 0.0, -1.0)
    with pytest.raises(DomainError):
        SkewScaleParams(1.0, 0.0, 1.0)


def test_char_exponent_examples():
    p = StableParams(1.7, 1.5, 1.5)
    s = to_skew_scale(p)
    assert char_exponent(p, 0.0) == 0.0
    for u in (-2.0, 0.3, 4.0):
        psi = char_exponent(p, u)
        assert psi.imag == 0.0
        assert psi.real == pytest.approx(-s.sigma * abs(u) ** 1.7, rel=1e-15)


@given(alphas, intensities, st.floats(-1e3, 1e3).filter(lambda u: abs(u) > 1e-3))
def test_char_exponent_equals_symbol(a, cs, u):
    p = StableParams(a, *cs)
    ce = char_exponent(p, u)
    assert abs(ce - symbol(p, u)) <= 1e-12 * abs(ce)


def test_levy_density_examples():
    p = StableParams(1.5, 0.7, 2.0)
    assert levy_density(p, 1.0) == 2.0
    assert levy_density(p, -1.0) == 0.7
    assert levy_density(p, 2.0) == pytest.approx(2.0 * 2.0**-2.5, rel=1e-15)
    with pytest.raises(DomainError):
        levy_density(p, 0.0)


def test_rng_streams_are_deterministic_and_distinct():
    a = make_rng(7, 3).standard_normal(5)
    assert np.array_equal(a, make_rng(7, 3).standard_normal(5))
    assert not np.array_equal(a, make_rng(7, 4).standard_normal(5))
    assert not np.array_equal(a, make_rng(8, 3).standard_normal(5))
    with pytest.raises(DomainError):
        make_rng(-1)


@pytest.mark.parametrize(
    "p",
    [StableParams(0.7, 1.0, 1.0), StableParams(1.3, 1.0, 5.0), StableParams(1.7, 5.0, 1.0), StableParams(0.5, 0.0, 1.0)],
)
def test_sampler_empirical_cf(p):
    x = sample_standard(p, make_rng(11, 0), N)
    for u in (0.5, 1.0, 2.0):
        err = abs(np.mean(np.exp(1j * u * x)) - np.exp(char_exponent(p, u)))
        assert err <= 4.0 / math.sqrt(N)


@pytest.mark.parametrize("p", [StableParams(0.7, 1.0, 3.0), StableParams(1.5, 2.0, 1.0)])
def test_sampler_matches_reference_cdf(p):
    # independent reference: scipy's stable law in the S1 parametrization
    s = to_skew_scale(p)
    ref = stats.levy_stable(p.alpha, s.beta_skew, loc=0.0, scale=s.sigma ** (1.0 / p.alpha))
    ref.dist.parameterization = "S1"
    x = sample_standard(p, make_rng(12, 0), N)
    for q in (-2.0, -0.5, 0.0, 0.7, 3.0):
        assert np.mean(x <= q) == pytest.approx(ref.cdf(q), abs=4.0 / math.sqrt(N))


def test_symmetric_sampler_has_no_sign_bias():
    x = sample_standard(StableParams(1.2, 2.0, 2.0), make_rng(13, 0), N)
    assert abs(np.mean(np.sign(x))) <= 4.0 / math.sqrt(N)


def test_one_sided_small_alpha_draws_positive():
    x = sample_standard(StableParams(0.5, 0.0, 1.0), make_rng(14, 0), N)
    assert np.all(x > 0)


def test_scalar_draw():
    assert isinstance(sample_standard(StableParams(1.5, 1.0, 1.0), make_rng(1)), float)


def test_self_similarity_of_increments():
    p = StableParams(1.4, 1.0, 2.0)
    dt = 1e-3
    x = dt ** (1.0 / p.alpha) * sample_standard(p, make_rng(15, 0), N)
    for u in (5.0, 20.0, 60.0):
        err = abs(np.mean(np.exp(1j * u * x)) - np.exp(dt * char_exponent(p, u)))
        assert err <= 4.0 / math.sqrt(N)


def test_moment_of_order_zero_is_one():
    assert empirical_moment(StableParams(1.5, 1.0, 1.0), 0.0, 1.0, 10, make_rng(1)) == 1.0


def test_first_moment_stabilizes():
    p = StableParams(1.5, 1.0, 1.0)
    a = empirical_moment(p, 1.0, 1.0, 200_000, make_rng(16, 0))
    b = empirical_moment(p, 1.0, 1.0, 400_000, make_rng(16, 1))
    assert abs(b - a) / a < 0.05


def test_first_moment_against_closed_form():
    # symmetric case: E|X_1| = 2 Gamma(1 - 1/alpha) sigma^(1/alpha) / pi
    p = StableParams(1.5, 1.0, 1.0)
    s = to_skew_scale(p)
    exact = 2.0 * math.gamma(1.0 - 1.0 / 1.5) * s.sigma ** (1.0 / 1.5) / math.pi
    est = empirical_moment(p, 1.0, 1.0, 400_000, make_rng(17, 0))
    assert est == pytest.approx(exact, rel=0.03)


def test_moment_of_order_alpha_keeps_growing():
    p = StableParams(1.5, 1.0, 1.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ExpectedDivergenceWarning)
        means = [
            np.median([empirical_moment(p, 1.5, 1.0, n, make_rng(18, r)) for r in range(15)])
            for n in (10**3, 10**4, 10**5)
        ]
    assert means[0] < means[1] < means[2]


def test_divergent_moment_warns():
    with pytest.warns(ExpectedDivergenceWarning):
        empirical_moment(StableParams(1.5, 1.0, 1.0), 1.6, 1.0, 100, make_rng(1))
