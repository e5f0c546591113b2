"""Reduced-scale invariant and oracle checks behind ``uavnoma validate``.

Each check compares a production code path with an independent route
(quadrature, sampling, or an algebraically different closed form) and
returns a :class:`CheckResult`.  The quadrature helpers are public so the
test suite can reuse them.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy import integrate, stats

from . import bivariate as _bv
from . import geometry as _geo
from . import univariate as _uv
from .common import Uav
from .config import RunConfig
from .montecarlo import SimPlan, mc_noma_counts, mc_oma_outage, noma_indicators, binomial_ci95
from .outage import (CertainOutageError, ESCALATION, noma_outage_analytic, noma_threshold,
                     oma_outage_analytic, oma_threshold)

__all__ = [
    "CheckResult",
    "pdf_total_mass",
    "noma_outage_quadrature",
    "oma_outage_quadrature",
    "run_checks",
]


class CheckResult(NamedTuple):
    name: str
    passed: bool
    detail: str


def pdf_total_mass(params, ktr1=None, nodes=240):
    """Integral of :func:`joint_pdf_closed` over the quadrant by tensor Gauss-Legendre.

    The integration box ``[0, R]^2`` with ``R = 8 sigma sqrt(1+K)`` holds all
    but a negligible fraction of the mass.
    """
    ktr1 = _bv.adaptive_ktr1(params) if ktr1 is None else ktr1
    r_hi = 8.0 * params.sigma * math.sqrt(1.0 + params.k_factor)
    x, w = np.polynomial.legendre.leggauss(nodes)
    r = 0.5 * r_hi * (x + 1.0)
    w = 0.5 * r_hi * w
    f = _bv.joint_pdf_closed_grid(params, _bv.TruncationOrders(ktr1, 0), r, r)
    return float(w @ f @ w)


def noma_outage_quadrature(params, geo, cfg, trunc, uav, tol=1e-12):
    """``int F_R(gamma* w) f_d(w) dw`` with the raw (unclamped) series CDF."""
    g_star = noma_threshold(cfg, uav)
    lo, hi = geo.support(uav)

    def f(w):
        _, info = _bv.marginal_cdf(params, trunc, uav, g_star * w, full_output=True)
        return info["raw"] * _geo.distance_pdf(geo, uav, w)

    return integrate.quad(f, lo, hi, epsabs=tol, epsrel=tol, limit=200)[0]


def oma_outage_quadrature(uparams, geo, cfg, trunc_k, uav, tol=1e-12):
    """``int F_X(gamma^OMA w^2) f_d(w) dw`` with the raw series CDF."""
    gamma = oma_threshold(cfg)
    p = cfg.p_g(uav)
    lo, hi = geo.support(uav)

    def f(w):
        _, info = _uv.univariate_cdf(uparams, trunc_k, p, gamma * w * w, full_output=True)
        return info["raw"] * _geo.distance_pdf(geo, uav, w)

    return integrate.quad(f, lo, hi, epsabs=tol, epsrel=tol, limit=200)[0]


# ---------------------------------------------------------------------------


def _check_pdf_oracle(config):
    params = config.bivariate()
    trunc = _bv.TruncationOrders(config.truncation.pdf_ktr1, 0)
    grid = np.linspace(0.1, 3.0, 8)
    worst = 0.0
    for a in grid:
        closed = _bv.joint_pdf_closed(params, trunc, a, grid)
        for b, c in zip(grid, closed):
            worst = max(worst, abs(c - _bv.joint_pdf_quadrature(params, a, b)))
    return CheckResult("pdf closed vs quadrature", worst < 1e-4, f"max diff {worst:.2e} on 8x8 grid")


def _check_normalization(config):
    params = config.bivariate()
    ktr1 = _bv.adaptive_ktr1(params)
    mass = pdf_total_mass(params, ktr1)
    return CheckResult("pdf normalization", abs(mass - 1.0) < 1e-3, f"mass {mass:.6f} at ktr1={ktr1}")


def _check_cdf_forms(config):
    params, trunc = config.bivariate(), config.trunc()
    worst = 0.0
    for u in (Uav.UAV1, Uav.UAV2):
        for g in np.arange(1, 11) * 0.05:
            worst = max(worst, abs(_bv.marginal_cdf(params, trunc, u, g)
                                   - _bv.marginal_cdf_gamma_form(params, trunc, u, g)))
    return CheckResult("cdf series vs gamma form", worst < 1e-6, f"max diff {worst:.2e}")


def _check_cdf_quadrature(config):
    params, trunc = config.bivariate(), config.trunc()
    a = _bv.marginal_cdf(params, trunc, Uav.UAV1, 0.5)
    q = _bv.marginal_cdf_quadrature(params, Uav.UAV1, 0.5)
    return CheckResult("cdf series vs 2-D quadrature", abs(a - q) < 1e-4, f"diff {abs(a - q):.2e} at gamma=0.5")


def _check_distance_moments(config):
    geo = config.geometry_params()
    worst = 0.0
    for u in (Uav.UAV1, Uav.UAV2):
        lo, hi = geo.support(u)
        for k in range(11):
            q = integrate.quad(lambda w: w ** (2 * (k + 1)) * _geo.distance_pdf(geo, u, w), lo, hi,
                               epsrel=1e-13, epsabs=0.0)[0]
            worst = max(worst, abs(_geo.g_bar(geo, geo.lam(u), k) / q - 1.0))
    return CheckResult("distance moments", worst < 1e-9, f"max rel diff {worst:.2e}, k <= 10")


def _check_distance_average(config):
    params, uparams = config.bivariate(), config.univariate()
    geo, link, trunc = config.geometry_params(), config.link_config(), config.trunc()
    worst = 0.0
    for u in (Uav.UAV1, Uav.UAV2):
        try:
            a = noma_outage_analytic(params, geo, link, trunc, u).diagnostic["raw"]
            worst = max(worst, abs(a - noma_outage_quadrature(params, geo, link, trunc, u)))
        except CertainOutageError:
            pass
        a = oma_outage_analytic(uparams, geo, link, trunc.ktr1, u).diagnostic["raw"]
        worst = max(worst, abs(a - oma_outage_quadrature(uparams, geo, link, trunc.ktr1, u)))
    return CheckResult("distance-average consistency", worst < 1e-6, f"max diff {worst:.2e}")


def _check_moment(config, samples, rng):
    params = config.bivariate()
    r1, r2 = _bv.sample_pair(params, rng, samples)
    target = params.sigma ** 2 * (1.0 + params.k_factor)
    err = max(abs(np.mean(r1 * r1) / target - 1.0), abs(np.mean(r2 * r2) / target - 1.0))
    return CheckResult("envelope second moment", err < 0.01, f"max rel err {err:.2e}")


def _check_distance_ks(config, samples, rng):
    geo = config.geometry_params()
    crit = 1.63 / math.sqrt(samples)  # 1% level
    worst = 0.0
    for u in (Uav.UAV1, Uav.UAV2):
        w = _geo.sample_distance(geo, u, rng, samples)
        worst = max(worst, stats.kstest(w, lambda x: _geo.distance_cdf(geo, u, x)).statistic)
    return CheckResult("distance sampler KS", worst < crit, f"D={worst:.2e} (critical {crit:.2e})")


def _check_univariate_sampler(config, samples, rng):
    uparams = config.univariate()
    x = _uv.sample_univariate_power(uparams, 1.0, rng, samples)
    worst = 0.0
    for g in (0.2, 0.4, 0.6, 0.8):
        f = _uv.univariate_cdf(uparams, 120, 1.0, g)
        tol = 4.0 * math.sqrt(max(f * (1 - f), 1e-12) / samples) + 1e-4
        worst = max(worst, abs(np.mean(x < g) - f) / tol)
    return CheckResult("univariate sampler vs cdf", worst <= 1.0, f"max deviation {worst:.2f} of allowance")


def _check_event_equivalence(config, samples, rng):
    ind = noma_indicators(config.bivariate(), config.geometry_params(), config.link_config(), rng, samples)
    mismatch = sum(int(np.count_nonzero(a != b)) for a, b in ind.values())
    return CheckResult("envelope/SINR event equivalence", mismatch == 0, f"{mismatch} mismatches")


def _check_mc_agreement(config, samples):
    params, uparams = config.bivariate(), config.univariate()
    geo, link, trunc = config.geometry_params(), config.link_config(), config.trunc()
    plan = SimPlan(samples, config.sim.seed, min(config.sim.batch_size, samples))
    counts = mc_noma_counts(params, geo, link, plan)
    bad, compared = [], 0
    for u in (Uav.UAV1, Uav.UAV2):
        pairs = [("noma", noma_outage_analytic(params, geo, link, trunc, u, accuracy=ESCALATION).probability,
                  counts[u - 1] / samples, binomial_ci95(counts[u - 1], samples))]
        r = mc_oma_outage(uparams, geo, link, plan, u)
        pairs.append(("oma", oma_outage_analytic(uparams, geo, link, trunc.ktr1, u, accuracy=ESCALATION).probability,
                      r.probability, r.ci95))
        for name, a, m, ci in pairs:
            if a > 1e-3:
                compared += 1
                if abs(a - m) > max(0.05 * a, ci):
                    bad.append(f"{name}_uav{int(u)}")
    detail = f"{compared} pairs compared" + (f", failing: {', '.join(bad)}" if bad else "")
    return CheckResult("analytic vs Monte Carlo outage", not bad, detail)


def _check_round_trip(config):
    again = RunConfig.from_ini(config.to_ini())
    return CheckResult("config round trip", again == config, "parse(serialize(config)) == config")


def run_checks(config: RunConfig, samples: int = 100_000):
    """Run every check at ``samples`` Monte Carlo draws; seeded from ``config.sim.seed``."""
    rng = np.random.default_rng(config.sim.seed)
    results = [
        _check_round_trip(config),
        _check_pdf_oracle(config),
        _check_normalization(config),
        _check_cdf_forms(config),
        _check_cdf_quadrature(config),
        _check_distance_moments(config),
        _check_distance_average(config),
        _check_moment(config, samples, rng),
        _check_distance_ks(config, samples, rng),
        _check_univariate_sampler(config, samples, rng),
        _check_event_equivalence(config, samples, rng),
        _check_mc_agreement(config, samples),
    ]
    return results
