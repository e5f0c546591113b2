import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, stats

from uavnoma.common import Uav, as_uav, db_to_linear, linear_to_db
from uavnoma.geometry import GeometryParams, distance_cdf, distance_pdf, g_bar, log_g_bar, sample_distance
from uavnoma.univariate import (
    UnivariateShadowedParams,
    alpha_bar_coeff,
    sample_univariate_power,
    univariate_cdf,
)

from oracles import shadowed_envelope_cdf

GEO = GeometryParams()
OMA = UnivariateShadowedParams.from_db(10.0, 10.0)


def test_uav_parsing():
    assert as_uav("uav2") is Uav.UAV2
    assert as_uav(1) is Uav.UAV1
    assert as_uav("2") is Uav.UAV2
    with pytest.raises(ValueError):
        as_uav(3)
    assert db_to_linear(10.0) == pytest.approx(10.0)
    assert linear_to_db(100.0) == pytest.approx(20.0)


def test_geometry_validation():
    with pytest.raises(ValueError, match="lambda_1 < lambda_2"):
        GeometryParams(lambda_1=3.5, lambda_2=3.0)
    with pytest.raises(ValueError):
        GeometryParams(lambda_2=4.0)
    with pytest.raises(ValueError):
        GeometryParams(d_alt=0.0)


def test_distance_pdf_values():
    assert distance_pdf(GEO, 1, 2.5) == pytest.approx(0.3125)
    w_min, w_max = GEO.support(1)
    assert w_min == pytest.approx(math.sqrt(4.04))
    assert distance_pdf(GEO, 1, 2.0) == 0.0
    assert distance_pdf(GEO, 1, w_max + 1e-9) == 0.0
    assert (w_max ** 2 - w_min ** 2) / GEO.r_a ** 2 == pytest.approx(1.0, abs=1e-12)
    for u in (1, 2):
        lo, hi = GEO.support(u)
        total = integrate.quad(lambda w: distance_pdf(GEO, u, w), lo, hi, epsabs=1e-14)[0]
        assert total == pytest.approx(1.0, abs=1e-12)
        assert distance_cdf(GEO, u, lo) == 0.0 and distance_cdf(GEO, u, hi) == pytest.approx(1.0)


def test_distance_sampler_edges_and_mean():
    from uavnoma.geometry import _distance_from_uniform
    lo, hi = GEO.support(1)
    assert _distance_from_uniform(GEO, 1, 0.0) == pytest.approx(lo)
    assert _distance_from_uniform(GEO, 1, 1.0) == pytest.approx(hi)
    w = sample_distance(GEO, 1, np.random.default_rng(0), 1_000_000)
    assert np.mean(w ** 2) == pytest.approx(12.04, abs=0.05)
    assert isinstance(sample_distance(GEO, 2, 1), float)


def test_distance_sampler_ks():
    for u in (1, 2):
        w = sample_distance(GEO, u, np.random.default_rng(10 + u), 1_000_000)
        assert stats.kstest(w, lambda x: distance_cdf(GEO, u, x)).statistic < 3e-3


def test_g_bar_values():
    assert g_bar(GEO, 2.0, 0) == pytest.approx((20.04 ** 2 - 4.04 ** 2) / 32.0, rel=1e-14)
    assert g_bar(GEO, 2.0, 0) == pytest.approx(12.04, rel=1e-14)
    with pytest.raises(OverflowError):
        g_bar(GEO, 2.0, 400)
    assert np.isfinite(log_g_bar(GEO, 2.0, 400))
    with pytest.raises(ValueError):
        g_bar(GEO, 5.0, 1)


@pytest.mark.parametrize("uav", [1, 2])
def test_g_bar_matches_quadrature(uav):
    lo, hi = GEO.support(uav)
    for k in range(11):
        q = integrate.quad(lambda w: w ** (2 * (k + 1)) * distance_pdf(GEO, uav, w), lo, hi,
                           epsrel=1e-13, epsabs=0.0)[0]
        assert g_bar(GEO, GEO.lam(uav), k) == pytest.approx(q, rel=1e-9)


def test_alpha_bar_values():
    p = UnivariateShadowedParams(1.0, 1.0)
    assert alpha_bar_coeff(p, 1.0, 0.0, 0, 0) == 0.0
    assert alpha_bar_coeff(p, 1.0, 1.0, 0, 0) == pytest.approx(1.0, rel=1e-15)
    # sign alternates with k - i
    assert alpha_bar_coeff(p, 1.0, 1.0, 1, 0) < 0 < alpha_bar_coeff(p, 1.0, 1.0, 1, 1)
    with pytest.raises(ValueError):
        alpha_bar_coeff(p, 1.0, 1.0, 1, 2)


def _oma_oracle(params, p_g, g):
    K, m = params.k_factor, params.m_shape
    return shadowed_envelope_cdf(math.sqrt(g / p_g), 1.0 / (1.0 + K), K / (1.0 + K), m)


@pytest.mark.parametrize("params", [OMA, UnivariateShadowedParams(1.0, 2.0), UnivariateShadowedParams(0.0, 1.0)])
def test_univariate_cdf_matches_mixture_oracle(params):
    for g in (0.1, 1.0, 3.0):
        assert univariate_cdf(params, 60, 10.0, g) == pytest.approx(_oma_oracle(params, 10.0, g), rel=1e-9)


def test_univariate_cdf_zero_and_rayleigh():
    assert univariate_cdf(OMA, 30, 10.0, 0.0) == 0.0
    ray = UnivariateShadowedParams(0.0, 1.0)
    assert univariate_cdf(ray, 40, 2.0, 1.5) == pytest.approx(1 - math.exp(-0.75), rel=1e-12)


def test_univariate_cdf_monotone():
    gs = np.linspace(0.01, 3.0, 60)
    vals = [univariate_cdf(OMA, 30, 10.0, g) for g in gs]
    assert np.all(np.diff(vals) >= 0)
    by_power = [univariate_cdf(OMA, 30, p, 1.0) for p in (40.0, 20.0, 10.0, 5.0)]
    assert np.all(np.diff(by_power) >= 0)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, 1e3), st.floats(0.5, 30.0), st.floats(0.1, 100.0), st.floats(0.0, 200.0))
def test_univariate_cdf_clamped(k_factor, m, p_g, g):
    try:
        v = univariate_cdf(UnivariateShadowedParams(k_factor, m), 30, p_g, g)
    except OverflowError:
        return
    assert 0.0 <= v <= 1.0


@pytest.mark.parametrize("params", [OMA, UnivariateShadowedParams(2.0, 1.0)])
def test_univariate_sampler_vs_cdf(params):
    n = 1_000_000
    x = sample_univariate_power(params, 10.0, np.random.default_rng(4), n)
    assert np.mean(x) == pytest.approx(10.0, abs=0.1)
    for g in (0.1, 1.0, 3.0, 6.0, 10.0):
        f = univariate_cdf(params, 120, 10.0, g)
        assert abs(np.mean(x < g) - f) <= 3 * math.sqrt(f * (1 - f) / n) + 1e-6


def test_univariate_sampler_rayleigh_ks():
    x = sample_univariate_power(UnivariateShadowedParams(0.0, 1.0), 10.0, np.random.default_rng(6), 1_000_000)
    assert stats.kstest(x, lambda t: 1 - np.exp(-t / 10.0)).statistic < 5e-3
