"""Univariate Rician shadowed power model for the OMA benchmark.

The link gain ``h = sqrt(1/(1+K)) X + Z`` has unit mean power: the diffuse
part carries ``1/(1+K)`` and the Nakagami-m LOS part ``K/(1+K)``.  The
received SNR is ``X_i = P |h|^2`` with mean ``P``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sp

from .common import db_to_linear
from .special import SeriesAccuracy

__all__ = [
    "UnivariateShadowedParams",
    "alpha_bar_coeff",
    "univariate_cdf",
    "sample_univariate_power",
]

_LOG_MAX = 709.782712893384


@dataclass(frozen=True)
class UnivariateShadowedParams:
    k_factor: float = 10.0
    m_shape: float = 10.0

    def __post_init__(self):
        if not self.k_factor >= 0:
            raise ValueError(f"k_factor must be >= 0, got {self.k_factor!r}")
        if not self.m_shape >= 0.5:
            raise ValueError(f"m_shape must be >= 0.5, got {self.m_shape!r}")

    @classmethod
    def from_db(cls, k_factor_db, m_shape=10.0):
        return cls(k_factor=db_to_linear(k_factor_db), m_shape=m_shape)


def _log_abs_alpha_bar(params, p_g, gamma, k, i):
    """``ln |alpha_bar(k, i)|`` on broadcast integer arrays ``k >= i``."""
    K, m = params.k_factor, params.m_shape
    k = np.asarray(k, dtype=float)
    i = np.asarray(i, dtype=float)
    if K > 0:
        i_log = i * math.log(K / (K + m))
    else:
        i_log = np.where(i == 0, 0.0, -np.inf)
    return (m * math.log(m / (K + m))
            + sp.gammaln(m + i) - sp.gammaln(m) - 2 * sp.gammaln(i + 1)
            + i_log
            + (k + 1) * math.log((1.0 + K) * gamma / p_g)
            - sp.gammaln(k - i + 1) - np.log(k + 1))


def alpha_bar_coeff(params: UnivariateShadowedParams, p_g: float, gamma: float, k: int, i: int) -> float:
    """Signed coefficient ``alpha_bar(k, i, P, gamma)`` of the power-CDF series.

    ``(-1)^(k-i) (m/(K+m))^m (m)_i/(i!)^2 (K/(K+m))^i ((1+K)/P)^(k+1) gamma^(k+1) / ((k-i)! (k+1))``
    """
    if not 0 <= i <= k:
        raise ValueError(f"need 0 <= i <= k, got k={k}, i={i}")
    if not p_g > 0:
        raise ValueError("p_g must be > 0")
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    if gamma == 0:
        return 0.0
    log_mag = float(_log_abs_alpha_bar(params, p_g, gamma, k, i))
    if log_mag > _LOG_MAX:
        raise OverflowError(f"alpha_bar({k},{i}) exceeds the double-precision range")
    return (-1.0) ** (k - i) * math.exp(log_mag)


def _signed_terms(params, p_g, gamma, trunc_k, extra_log=None):
    k = np.arange(trunc_k + 1)[:, None]
    i = np.arange(trunc_k + 1)[None, :]
    with np.errstate(invalid="ignore"):
        log_t = np.where(i <= k, _log_abs_alpha_bar(params, p_g, gamma, k, np.minimum(i, k)), -np.inf)
    if extra_log is not None:
        log_t = log_t + np.asarray(extra_log)[:, None]
    if np.max(log_t) > _LOG_MAX:
        raise OverflowError("univariate CDF series term exceeds the double-precision range")
    return np.where((k - i) % 2 == 0, 1.0, -1.0) * np.exp(log_t)


def _diagnostic(by_order, raw, accuracy):
    scale = max(abs(raw), 1e-300)
    max_ratio = float(np.max(np.abs(by_order)) / scale)
    tail_ratio = float(abs(by_order[-1]) / scale)
    return {
        "raw": raw,
        "max_term_ratio": max_ratio,
        "tail_ratio": tail_ratio,
        "valid": bool(max_ratio <= 10.0 and tail_ratio <= accuracy.rel_tol),
    }


def univariate_cdf(params: UnivariateShadowedParams, trunc_k: int, p_g: float, gamma: float,
                   full_output: bool = False,
                   accuracy: SeriesAccuracy = SeriesAccuracy(rel_tol=1e-6)):
    """``Pr(P |h|^2 < gamma)`` from the double sum of :func:`alpha_bar_coeff`, clamped to [0, 1].

    ``full_output=True`` also returns the raw sum and an alternating-series
    validity flag computed from the per-order (index ``k``) contributions.
    """
    if not p_g > 0:
        raise ValueError("p_g must be > 0")
    gamma = float(gamma)
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    if gamma == 0.0:
        info = {"raw": 0.0, "max_term_ratio": 0.0, "tail_ratio": 0.0, "valid": True}
        return (0.0, info) if full_output else 0.0
    terms = _signed_terms(params, p_g, gamma, trunc_k)
    raw = math.fsum(terms.ravel())
    value = min(max(raw, 0.0), 1.0)
    if not full_output:
        return value
    return value, _diagnostic(terms.sum(axis=1), raw, accuracy)


def _power_from_draws(params, p_g, normals, los_power):
    """``P |h|^2`` from standard normals of shape ``(2, ...)`` and ``|Z|^2`` draws."""
    scatter = math.sqrt(0.5 / (1.0 + params.k_factor))
    re = scatter * normals[0] + np.sqrt(los_power)
    im = scatter * normals[1]
    return p_g * (re * re + im * im)


def _los_power(params, rng, shape):
    omega = params.k_factor / (1.0 + params.k_factor)
    if omega == 0.0:
        return np.zeros(shape)
    return rng.gamma(params.m_shape, omega / params.m_shape, shape)


def sample_univariate_power(params: UnivariateShadowedParams, p_g: float, rng=None, size=None):
    """Draw the received SNR ``P |h|^2`` with ``E|h|^2 = 1``."""
    if not p_g > 0:
        raise ValueError("p_g must be > 0")
    rng = np.random.default_rng(rng)
    shape = () if size is None else (size if isinstance(size, tuple) else (int(size),))
    normals = rng.standard_normal((2,) + shape)
    x = _power_from_draws(params, p_g, normals, _los_power(params, rng, shape))
    return float(x) if size is None else x
