"""Closed-form outage probabilities of the two-UAV downlink.

NOMA: UAV-1 decodes with imperfect SIC (residual strength ``beta``), UAV-2
treats UAV-1's signal as noise.  Outage happens when the envelope falls
below ``gamma_i^* d_i``; averaging the marginal-CDF series over the
link-distance law replaces each ``d^(2(l+1))`` by a distance moment.

OMA: each UAV sees an independent univariate Rician shadowed link at twice
the NOMA rate; outage is ``P |h|^2 < gamma^OMA d^2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy import special as sp

from . import bivariate as _bv
from . import univariate as _uv
from .bivariate import BivariateShadowedParams, TruncationOrders, marginal_cdf
from .common import Uav, as_uav, db_to_linear
from .geometry import GeometryParams, log_g_bar
from .special import SeriesAccuracy
from .univariate import UnivariateShadowedParams

__all__ = [
    "LinkConfig",
    "OutageResult",
    "CertainOutageError",
    "noma_thresholds",
    "noma_threshold",
    "noma_outage_analytic",
    "oma_threshold",
    "oma_outage_analytic",
    "noma_outage_gamma_form",
    "oma_outage_gamma_form",
    "ESCALATION",
]

_LOG_MAX = 709.782712893384


class CertainOutageError(ValueError):
    """The decoding threshold is unreachable at any channel gain."""

    def __init__(self, uav, message):
        super().__init__(message)
        self.uav = uav


@dataclass(frozen=True)
class LinkConfig:
    """Power split, SIC residual, rate and normalized transmit SNRs (linear)."""

    a_gs1: float = 0.5
    beta: float = 0.01
    r_oma: float = 0.1
    p_g1: float = 10.0
    p_g2: float = 10.0

    def __post_init__(self):
        if not 0 < self.a_gs1 < 1:
            raise ValueError(f"a_gs1 must lie in (0, 1), got {self.a_gs1!r}")
        if not 0 <= self.beta <= 1:
            raise ValueError(f"beta must lie in [0, 1], got {self.beta!r}")
        if not self.r_oma > 0:
            raise ValueError(f"r_oma must be > 0, got {self.r_oma!r}")
        if not (self.p_g1 > 0 and self.p_g2 > 0):
            raise ValueError("transmit SNRs must be > 0")

    @classmethod
    def from_db(cls, p_g1_db=10.0, p_g2_db=10.0, a_gs1=0.5, beta=0.01, r_oma=0.1):
        return cls(a_gs1=a_gs1, beta=beta, r_oma=r_oma,
                   p_g1=db_to_linear(p_g1_db), p_g2=db_to_linear(p_g2_db))

    @property
    def a_gs2(self) -> float:
        return 1.0 - self.a_gs1

    @property
    def r_noma(self) -> float:
        return 0.5 * self.r_oma

    def p_g(self, uav) -> float:
        return self.p_g1 if as_uav(uav) is Uav.UAV1 else self.p_g2


@dataclass(frozen=True)
class OutageResult:
    """Outage probability plus how it was obtained.

    ``trunc_used`` is the truncation (analytic) or the sample count (Monte
    Carlo).  ``diagnostic`` holds validity flags, the raw unclamped series
    value, and for Monte Carlo the 95% binomial half-width ``ci95``.
    """

    probability: float
    method: str
    trunc_used: Union[TruncationOrders, int]
    diagnostic: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not 0.0 <= self.probability <= 1.0:
            raise ValueError(f"probability must lie in [0, 1], got {self.probability!r}")
        if self.method not in ("analytic", "monte_carlo"):
            raise ValueError(f"unknown method {self.method!r}")

    @property
    def ci95(self) -> float:
        return self.diagnostic.get("ci95", 0.0)

    @property
    def valid(self) -> bool:
        return self.diagnostic.get("valid", True)


def _noma_gamma(cfg):
    return 2.0 ** cfg.r_noma - 1.0


def noma_threshold(cfg: LinkConfig, uav) -> float:
    """Normalized envelope threshold ``gamma_i^*`` for one UAV.

    Raises :class:`CertainOutageError` when the bracketed SINR ceiling is not
    positive.
    """
    uav = as_uav(uav)
    g = _noma_gamma(cfg)
    if uav is Uav.UAV1:
        denom = cfg.a_gs1 - cfg.a_gs2 * cfg.beta * g
        p = cfg.p_g1
    else:
        denom = cfg.a_gs2 - cfg.a_gs1 * g
        p = cfg.p_g2
    if denom <= 0:
        raise CertainOutageError(uav, f"{uav.name}: SINR can never reach the NOMA threshold {g:.6g}")
    return math.sqrt(g / (p * denom))


def noma_thresholds(cfg: LinkConfig):
    """``(gamma_noma, gamma1_star, gamma2_star)`` with ``gamma_noma = 2^(R_oma/2) - 1``."""
    return _noma_gamma(cfg), noma_threshold(cfg, Uav.UAV1), noma_threshold(cfg, Uav.UAV2)


def oma_threshold(cfg: LinkConfig) -> float:
    return 2.0 ** cfg.r_oma - 1.0


def _certain(trunc, uav, err):
    return OutageResult(1.0, "analytic", trunc,
                        {"certain_outage": True, "valid": True, "raw": 1.0, "uav": int(uav), "reason": str(err)})


def _mean_reg_gamma(a, u, lo, hi):
    """``E[P(a, u s)]`` for ``s`` uniform on ``[lo, hi]``, vectorised over ``a``.

    Uses the antiderivative ``s P(a, u s) - (a/u) P(a+1, u s)``.
    """
    a = np.asarray(a, dtype=float)

    def F(s):
        return s * sp.gammainc(a, u * s) - (a / u) * sp.gammainc(a + 1.0, u * s)

    return (F(hi) - F(lo)) / (hi - lo)


def noma_outage_gamma_form(params: BivariateShadowedParams, geo: GeometryParams, cfg: LinkConfig,
                           ktr1: int, uav) -> OutageResult:
    """NOMA outage with the exponential expansion replaced by its exact integral.

    Same outer coefficients as :func:`noma_outage_analytic`, but the inner
    envelope integral is a regularized incomplete gamma averaged in closed
    form over the uniform law of ``d^2``.  Every term is positive, so the
    sum is well conditioned for any threshold.
    """
    uav = as_uav(uav)
    trunc = TruncationOrders(ktr1, 0)
    try:
        g_star = noma_threshold(cfg, uav)
    except CertainOutageError as err:
        return _certain(trunc, uav, err)
    A = _bv._constants(params)[0]
    lo, hi = (w * w for w in geo.support(uav))
    logd = _bv._log_margin_weights(params, ktr1, uav)
    n = np.arange(ktr1 + 1)
    w = np.exp(logd + (n + 1) * math.log(A) + sp.gammaln(n + 1.0) - math.log(4.0))
    raw = math.fsum(w * _mean_reg_gamma(n + 1.0, g_star ** 2 / A, lo, hi))
    return OutageResult(min(max(raw, 0.0), 1.0), "analytic", trunc,
                        {"raw": raw, "gamma_star": g_star, "form": "gamma", "valid": True,
                         "certain_outage": False})


def oma_outage_gamma_form(uparams: UnivariateShadowedParams, geo: GeometryParams, cfg: LinkConfig,
                          trunc_k: int, uav) -> OutageResult:
    """OMA outage summed as ``M sum_i (m)_i kappa^i / i! E[P(i+1, (1+K) gamma d^2 / P)]``.

    ``M = (m/(K+m))^m`` and ``kappa = K/(K+m)``; this is the limit of the
    alternating double series over its inner index, with positive terms.
    """
    uav = as_uav(uav)
    K, m = uparams.k_factor, uparams.m_shape
    gamma = oma_threshold(cfg)
    u = (1.0 + K) * gamma / cfg.p_g(uav)
    lo, hi = (w * w for w in geo.support(uav))
    i = np.arange(trunc_k + 1, dtype=float)
    if K > 0:
        i_log = i * math.log(K / (K + m))
    else:
        i_log = np.where(i == 0, 0.0, -np.inf)
    w = np.exp(m * math.log(m / (K + m)) + sp.gammaln(m + i) - sp.gammaln(m) + i_log - sp.gammaln(i + 1.0))
    raw = math.fsum(w * _mean_reg_gamma(i + 1.0, u, lo, hi))
    return OutageResult(min(max(raw, 0.0), 1.0), "analytic", trunc_k,
                        {"raw": raw, "gamma": gamma, "form": "gamma", "valid": True, "certain_outage": False})


def _escalate(first, evaluate, outer, accuracy):
    """Replace an invalid series result by the converged positive-term form.

    ``evaluate(order)`` computes the positive-term form at outer order
    ``order``; the order doubles from ``outer`` until two successive values
    agree to ``accuracy.rel_tol`` or ``accuracy.max_terms`` is reached.
    """
    result = evaluate(outer)
    converged = False
    while not converged and 2 * max(outer, 1) <= accuracy.max_terms:
        outer = 2 * max(outer, 1)
        nxt = evaluate(outer)
        converged = abs(nxt.diagnostic["raw"] - result.diagnostic["raw"]) <= accuracy.rel_tol * abs(nxt.diagnostic["raw"])
        result = nxt
    diag = dict(first.diagnostic)
    diag.update(raw=result.diagnostic["raw"], form="gamma", escalated=True, converged=converged,
                valid=converged, series_valid=first.valid,
                requested_trunc=first.trunc_used, requested_probability=first.probability)
    trunc = first.trunc_used
    used = TruncationOrders(outer, trunc.ktr2) if isinstance(trunc, TruncationOrders) else outer
    return OutageResult(result.probability, "analytic", used, diag)


# default stopping rule for truncation escalation
ESCALATION = SeriesAccuracy(max_terms=1280, rel_tol=1e-9)


def noma_outage_analytic(params: BivariateShadowedParams, geo: GeometryParams, cfg: LinkConfig,
                         trunc: TruncationOrders, uav, accuracy: SeriesAccuracy = None) -> OutageResult:
    """Distance-averaged NOMA outage of one UAV.

    Sums ``alpha(k,i,n) G(j, l, q, gamma*) Gbar(lambda, l + j)`` with
    ``(l, q) = (n, i-n)`` for UAV1 and ``(i-n, n)`` for UAV2.  The series
    validity flag is the marginal-CDF diagnostic at the worst-case
    argument ``gamma* w_max``.

    With ``accuracy`` given, a result flagged invalid is replaced by
    :func:`noma_outage_gamma_form` with the outer order raised until it
    settles; ``trunc_used`` then reports that order and the diagnostic
    keeps the flagged fixed-truncation value.
    """
    if accuracy is not None:
        first = noma_outage_analytic(params, geo, cfg, trunc, uav)
        if first.valid:
            return first
        return _escalate(first, lambda k: noma_outage_gamma_form(params, geo, cfg, k, uav), trunc.ktr1, accuracy)
    uav = as_uav(uav)
    try:
        g_star = noma_threshold(cfg, uav)
    except CertainOutageError as err:
        return _certain(trunc, uav, err)
    A = _bv._constants(params)[0]
    lam = geo.lam(uav)
    logd = _bv._log_margin_weights(params, trunc.ktr1, uav)
    n = np.arange(trunc.ktr1 + 1)[:, None]
    j = np.arange(trunc.ktr2 + 1)[None, :]
    log_t = (logd[:, None] + 2 * (n + j + 1) * math.log(g_star) - sp.gammaln(j + 1.0)
             - j * math.log(A) - np.log(4.0 * (n + j + 1)) + log_g_bar(geo, lam, n + j))
    if np.max(log_t) > _LOG_MAX:
        raise OverflowError("NOMA outage series term exceeds the double-precision range")
    terms = np.where(j % 2 == 0, 1.0, -1.0) * np.exp(log_t)
    raw = math.fsum(terms.ravel())
    _, w_max = geo.support(uav)
    _, edge = marginal_cdf(params, trunc, uav, g_star * w_max, full_output=True)
    diag = {
        "raw": raw,
        "gamma_star": g_star,
        "edge_gamma": g_star * w_max,
        "edge_max_term_ratio": edge["max_term_ratio"],
        "edge_tail_ratio": edge["tail_ratio"],
        "valid": edge["valid"],
        "certain_outage": False,
    }
    return OutageResult(min(max(raw, 0.0), 1.0), "analytic", trunc, diag)


def oma_outage_analytic(uparams: UnivariateShadowedParams, geo: GeometryParams, cfg: LinkConfig,
                        trunc_k: int, uav, accuracy: SeriesAccuracy = None) -> OutageResult:
    """Distance-averaged OMA outage ``sum_k sum_i alpha_bar(k, i, P_i, gamma^OMA) Gbar(lambda_i, k)``.

    The distance moment takes the outer index ``k``: the conditional CDF
    term ``gamma^(k+1)`` becomes ``(gamma d^2)^(k+1)`` under the outage
    event, and ``E[d^(2(k+1))] = Gbar(lambda_i, k)``.  ``accuracy`` works as in
    :func:`noma_outage_analytic`.
    """
    if accuracy is not None:
        first = oma_outage_analytic(uparams, geo, cfg, trunc_k, uav)
        if first.valid:
            return first
        return _escalate(first, lambda k: oma_outage_gamma_form(uparams, geo, cfg, k, uav), trunc_k, accuracy)
    uav = as_uav(uav)
    gamma = oma_threshold(cfg)
    p = cfg.p_g(uav)
    lam = geo.lam(uav)
    k = np.arange(trunc_k + 1)
    terms = _uv._signed_terms(uparams, p, gamma, trunc_k, extra_log=log_g_bar(geo, lam, k))
    raw = math.fsum(terms.ravel())
    _, w_max = geo.support(uav)
    _, edge = _uv.univariate_cdf(uparams, trunc_k, p, gamma * w_max ** 2, full_output=True)
    diag = {
        "raw": raw,
        "gamma": gamma,
        "edge_gamma": gamma * w_max ** 2,
        "edge_max_term_ratio": edge["max_term_ratio"],
        "edge_tail_ratio": edge["tail_ratio"],
        "valid": edge["valid"],
        "certain_outage": False,
    }
    return OutageResult(min(max(raw, 0.0), 1.0), "analytic", trunc_k, diag)
