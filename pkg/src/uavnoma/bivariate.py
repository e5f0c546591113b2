"""Bivariate Rician shadowed fading.

Two envelopes ``R_k = |H_k|`` with

    H_k = sigma*sqrt(1 - rho)*X_k + sigma*sqrt(rho)*X_0 + Z,   k = 1, 2

where ``X_0, X_1, X_2`` are unit-power circular complex Gaussians and ``Z``
is a shared line-of-sight term with Nakagami-m amplitude and power
``Omega_N = K * sigma**2``.

The closed-form joint PDF is a triple power series in ``(k, i, n)`` with
coefficients :func:`alpha_coeff`.  Every consumer in this package only
needs the coefficients summed over the outer index ``k`` for a fixed pair
of envelope exponents ``(n, q = i - n)``; that collapsed table is cached
per ``(params, ktr1)``.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy import special as sp

from .common import Uav, as_uav, db_to_linear
from .special import SeriesAccuracy, log_gamma, pochhammer_log

__all__ = [
    "BivariateShadowedParams",
    "TruncationOrders",
    "DegenerateCorrelationError",
    "QuadratureError",
    "alpha_coeff",
    "alpha_table",
    "adaptive_ktr1",
    "joint_pdf_closed",
    "joint_pdf_closed_grid",
    "joint_pdf_quadrature",
    "g_term",
    "marginal_cdf",
    "marginal_cdf_gamma_form",
    "marginal_cdf_quadrature",
    "sample_pair",
]

_LOG_MAX = 709.782712893384


class DegenerateCorrelationError(ValueError):
    """Raised when a closed-form evaluation is requested at rho = 0 or rho = 1."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""

    def __init__(self, message, error_estimate):
        super().__init__(f"{message} (achieved error estimate {error_estimate:.3e})")
        self.error_estimate = error_estimate


@dataclass(frozen=True)
class BivariateShadowedParams:
    """Parameters of the correlated Rician shadowed envelope pair.

    Parameters
    ----------
    sigma : float
        Scale of the diffuse component, ``E|sigma*sqrt(1-rho)X_k + sigma*sqrt(rho)X_0|^2 = sigma^2``.
    rho : float
        Cross-correlation coefficient in ``[0, 1]``.  Series evaluations need
        ``0 < rho < 1``; sampling accepts the endpoints.
    m : float
        Nakagami shaping parameter of the shadowed LOS term, ``m >= 0.5``.
    k_factor : float
        Linear Rician K factor ``Omega_N / sigma^2``.
    """

    sigma: float = 1.0
    rho: float = 0.5
    m: float = 10.0
    k_factor: float = 10.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma!r}")
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must lie in [0, 1], got {self.rho!r}")
        if not self.m >= 0.5:
            raise ValueError(f"Nakagami m must be >= 0.5, got {self.m!r}")
        if not self.k_factor >= 0:
            raise ValueError(f"k_factor must be >= 0, got {self.k_factor!r}")

    @classmethod
    def from_db(cls, k_factor_db, sigma=1.0, rho=0.5, m=10.0):
        return cls(sigma=sigma, rho=rho, m=m, k_factor=db_to_linear(k_factor_db))

    @property
    def omega_n(self) -> float:
        """Mean power of the shadowed LOS term."""
        return self.k_factor * self.sigma ** 2

    @property
    def scatter_var(self) -> float:
        """``sigma^2 (1 - rho)``: private diffuse power of each branch."""
        return self.sigma ** 2 * (1.0 - self.rho)

    def require_interior(self):
        if not 0.0 < self.rho < 1.0:
            raise DegenerateCorrelationError(
                f"closed-form evaluation needs 0 < rho < 1 (degenerate correlation), got rho={self.rho}"
            )


@dataclass(frozen=True)
class TruncationOrders:
    """Series truncation: ``ktr1`` for the outer joint-PDF series, ``ktr2`` for
    the exponential expansion used by the marginal CDF."""

    ktr1: int = 30
    ktr2: int = 10

    def __post_init__(self):
        for name in ("ktr1", "ktr2"):
            v = getattr(self, name)
            if int(v) != v or v < 0:
                raise ValueError(f"{name} must be a nonnegative integer, got {v!r}")


def _constants(params):
    """Return (A, b, c, log_prefactor) for the joint-PDF series."""
    params.require_interior()
    s2 = params.sigma ** 2
    rho, m, K = params.rho, params.m, params.k_factor
    A = s2 * (1.0 - rho)
    b = (1.0 + rho) / (s2 * rho * (1.0 - rho))
    c = K / (s2 * rho * (rho * m + K)) if K > 0 else 0.0
    log_pref = (math.log(8.0) + m * math.log(m * rho / (m * rho + K))
                - math.log(params.sigma ** 6 * rho * (1.0 - rho) ** 2))
    return A, b, c, log_pref


def alpha_coeff(params: BivariateShadowedParams, k: int, i: int, n: int) -> float:
    """Coefficient ``alpha(k, i, n)`` of the closed-form joint PDF.

    Evaluated factor by factor in the log domain::

        alpha = 8 (m)_{k-i} c^{k-i} (m rho/(m rho + K))^m k!
                / [ (n!)^2 ((i-n)!)^2 A^{2i} (1)_{k-i} (k-i)! sigma^6 rho (1-rho)^2 * 2 b^{k+1} ]

    with ``A = sigma^2 (1-rho)``, ``b = (1+rho)/(sigma^2 rho (1-rho))`` and
    ``c = K/(sigma^2 rho (rho m + K))``.  All factors are positive.
    """
    if not (0 <= n <= i <= k):
        raise ValueError(f"need 0 <= n <= i <= k, got k={k}, i={i}, n={n}")
    A, b, c, log_pref = _constants(params)
    d = k - i
    if d > 0 and c == 0.0:
        return 0.0
    log_a = (log_pref
             + pochhammer_log(params.m, d) + (d * math.log(c) if d else 0.0)
             - 2 * log_gamma(n + 1) - 2 * log_gamma(i - n + 1)
             - 2 * i * math.log(A)
             - pochhammer_log(1.0, d) - log_gamma(d + 1)
             + log_gamma(k + 1) - math.log(2.0) - (k + 1) * math.log(b))
    if log_a > _LOG_MAX:
        raise OverflowError(f"alpha({k},{i},{n}) exceeds the double-precision range")
    return math.exp(log_a)


def _log_base(params, kmax):
    """``log alpha(i + d, i, n) + 2 ln n! + 2 ln (i-n)!`` on an ``(i, d)`` grid.

    Entries with ``i + d > kmax`` are ``-inf``.
    """
    A, b, c, log_pref = _constants(params)
    idx = np.arange(kmax + 1, dtype=float)
    i = idx[:, None]
    d = idx[None, :]
    if c > 0:
        d_log_c = d * math.log(c)
    else:
        d_log_c = np.where(d == 0, 0.0, -np.inf)
    m = params.m
    base = (log_pref
            + sp.gammaln(m + d) - sp.gammaln(m) + d_log_c
            - 2 * sp.gammaln(d + 1)
            - 2 * i * math.log(A)
            + sp.gammaln(i + d + 1) - math.log(2.0) - (i + d + 1) * math.log(b))
    return np.where(i + d <= kmax, base, -np.inf)


@functools.lru_cache(maxsize=64)
def alpha_table(params: BivariateShadowedParams, ktr1: int):
    """Flat triangular table of every ``alpha(k, i, n)`` with ``k <= ktr1``.

    Returns
    -------
    k, i, n : ndarray of int
    log_alpha : ndarray of float
        Natural log of the (positive) coefficients.
    """
    base = _log_base(params, ktr1)
    ks, is_, ns = [], [], []
    for k in range(ktr1 + 1):
        for i in range(k + 1):
            for n in range(i + 1):
                ks.append(k)
                is_.append(i)
                ns.append(n)
    k = np.array(ks)
    i = np.array(is_)
    n = np.array(ns)
    log_alpha = base[i, k - i] - 2 * sp.gammaln(n + 1) - 2 * sp.gammaln(i - n + 1)
    for arr in (k, i, n, log_alpha):
        arr.flags.writeable = False
    return k, i, n, log_alpha


@functools.lru_cache(maxsize=64)
def _log_collapsed(params, ktr1):
    """``log C[n, q]`` with ``C[n, q] = sum_{k >= n+q}^{ktr1} alpha(k, n+q, n)``."""
    base = _log_base(params, ktr1)
    s = sp.logsumexp(base, axis=1)  # over d = k - i
    n = np.arange(ktr1 + 1)
    nn, qq = np.meshgrid(n, n, indexing="ij")
    tot = nn + qq
    lg = sp.gammaln(n + 1.0)
    out = np.full((ktr1 + 1, ktr1 + 1), -np.inf)
    ok = tot <= ktr1
    out[ok] = s[tot[ok]] - 2 * lg[nn[ok]] - 2 * lg[qq[ok]]
    out.flags.writeable = False
    return out


@functools.lru_cache(maxsize=64)
def _log_margin_weights(params, ktr1, which):
    """Log weights ``D[l]`` after integrating the other envelope over ``[0, inf)``.

    For UAV1 ``D[n] = sum_q C[n, q] q! A^(q+1)``; UAV2 swaps the roles.
    """
    A = params.scatter_var
    logc = _log_collapsed(params, ktr1)
    j = np.arange(ktr1 + 1)
    w = sp.gammaln(j + 1.0) + (j + 1) * math.log(A)
    if which is Uav.UAV1:
        d = sp.logsumexp(logc + w[None, :], axis=1)
    else:
        d = sp.logsumexp(logc + w[:, None], axis=0)
    d.flags.writeable = False
    return d


def _slice_masses(params, kmax):
    """Probability mass carried by each outer index ``k`` (terms integrated over the quadrant)."""
    A = params.scatter_var
    base = _log_base(params, kmax)
    i = np.arange(kmax + 1)
    # sum_n 1/(n!(i-n)!) = 2^i / i!
    w = (i + 2) * math.log(A) - math.log(4.0) + i * math.log(2.0) - sp.gammaln(i + 1.0)
    lm = base + w[:, None]
    out = np.empty(kmax + 1)
    for k in range(kmax + 1):
        ii = np.arange(k + 1)
        out[k] = sp.logsumexp(lm[ii, k - ii])
    return np.exp(out)


def adaptive_ktr1(params: BivariateShadowedParams,
                  accuracy: SeriesAccuracy = SeriesAccuracy(max_terms=1500, rel_tol=1e-10)) -> int:
    """Smallest outer truncation satisfying ``accuracy`` on the per-order probability mass.

    The mass contributed by outer order ``k`` is the integral of its terms
    over the whole quadrant, so the stopping rule directly bounds the
    probability left out of the truncated PDF.
    """
    chunk = 64
    kmax = chunk
    while True:
        kmax = min(kmax, accuracy.max_terms - 1)
        masses = _slice_masses(params, kmax)
        cum = np.cumsum(masses)
        small = masses < accuracy.rel_tol * cum
        run = 0
        for k, flag in enumerate(small):
            run = run + 1 if flag else 0
            if run >= accuracy.patience:
                return k
        if kmax >= accuracy.max_terms - 1:
            return kmax
        kmax *= 2


def _coef_matrix(params, ktr1):
    """Dimensionless coefficients ``C[n, q] n! q! A^(n+q)`` paired with Poisson weights."""
    A = params.scatter_var
    n = np.arange(ktr1 + 1)
    lg = sp.gammaln(n + 1.0)
    logc = _log_collapsed(params, ktr1) + lg[:, None] + lg[None, :] + (n[:, None] + n[None, :]) * math.log(A)
    return np.exp(logc)


def _poisson_weights(r, A, nmax):
    """``(r^2/A)^n exp(-r^2/A) / n!`` for n = 0..nmax, one row per radius."""
    lam = np.asarray(r, dtype=float) ** 2 / A
    n = np.arange(nmax + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        logp = n[None, :] * np.log(lam)[:, None] - lam[:, None] - sp.gammaln(n + 1.0)[None, :]
    logp = np.where((lam[:, None] == 0) & (n[None, :] == 0), 0.0, logp)
    logp = np.nan_to_num(logp, nan=-np.inf)
    return np.exp(logp)


def _resolve_ktr1(trunc):
    return trunc.ktr1 if isinstance(trunc, TruncationOrders) else int(trunc)


def joint_pdf_closed(params: BivariateShadowedParams, trunc, r1, r2):
    """Closed-form (truncated power-series) joint PDF of ``(R1, R2)``.

    Sums ``alpha(k,i,n) r1^(2n+1) r2^(2(i-n)+1) exp(-(r1^2+r2^2)/A)`` over
    ``k <= ktr1``.  Terms are regrouped by ``(n, i-n)`` and each monomial
    times the exponential is evaluated as a product of Poisson weights, so
    nothing overflows for any radius.  ``r1`` and ``r2`` broadcast.
    """
    ktr1 = _resolve_ktr1(trunc)
    A = _constants(params)[0]
    r1, r2 = np.asarray(r1, dtype=float), np.asarray(r2, dtype=float)
    if np.any(r1 < 0) or np.any(r2 < 0):
        raise ValueError("envelopes must be nonnegative")
    if (r1.size == 1 or r2.size == 1) and r1.size * r2.size > 1:
        # one side fixed: a single row or column of the tensor grid is much cheaper
        shape = np.broadcast_shapes(r1.shape, r2.shape)
        out = joint_pdf_closed_grid(params, ktr1, r1.ravel(), r2.ravel())
        return out.reshape(shape)
    r1, r2 = np.broadcast_arrays(r1, r2)
    shape = r1.shape
    a, b = r1.ravel(), r2.ravel()
    coef = _coef_matrix(params, ktr1)
    out = np.empty(a.size)
    step = max(1, 2 ** 22 // (ktr1 + 1))
    for s in range(0, a.size, step):
        p1 = _poisson_weights(a[s:s + step], A, ktr1)
        p2 = _poisson_weights(b[s:s + step], A, ktr1)
        out[s:s + step] = np.einsum("sn,sn->s", p1 @ coef, p2)
    out *= a * b
    out = np.maximum(out, 0.0).reshape(shape)
    return float(out) if out.ndim == 0 else out


def joint_pdf_closed_grid(params: BivariateShadowedParams, trunc, r1, r2) -> np.ndarray:
    """Closed-form joint PDF on the tensor grid ``r1 x r2`` (shape ``len(r1), len(r2)``)."""
    ktr1 = _resolve_ktr1(trunc)
    A = _constants(params)[0]
    r1 = np.atleast_1d(np.asarray(r1, dtype=float))
    r2 = np.atleast_1d(np.asarray(r2, dtype=float))
    coef = _coef_matrix(params, ktr1)
    p1 = _poisson_weights(r1, A, ktr1) * r1[:, None]
    p2 = _poisson_weights(r2, A, ktr1) * r2[:, None]
    return np.maximum(p1 @ coef @ p2.T, 0.0)


def _log_hyp1f1_b1(m, z):
    val = sp.hyp1f1(m, 1.0, z)
    if np.isfinite(val) and val > 0:
        return math.log(val)
    # Kummer: 1F1(m;1;z) = e^z 1F1(1-m;1;-z)
    return z + math.log(sp.hyp1f1(1.0 - m, 1.0, -z))


def _quadrature_log_integrand(params, r1, r2):
    s2 = params.sigma ** 2
    rho, m, K = params.rho, params.m, params.k_factor
    A = s2 * (1.0 - rho)
    c = K / (s2 * rho * (rho * m + K)) if K > 0 else 0.0
    log_pref = (math.log(8.0) + m * math.log(m * rho / (m * rho + K))
                - math.log(params.sigma ** 6 * rho * (1.0 - rho) ** 2)
                + math.log(r1) + math.log(r2))
    a = 2.0 / A

    def logf(x):
        # exp(-(r1^2+r2^2)/A - b x^2) I0 I0 regrouped around the scaled Bessel functions
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            core = (log_pref + np.log(x) - (r1 - x) ** 2 / A - (r2 - x) ** 2 / A - x ** 2 / (s2 * rho)
                    + np.log(sp.i0e(a * r1 * x)) + np.log(sp.i0e(a * r2 * x)))
        hyp = np.vectorize(lambda z: _log_hyp1f1_b1(m, z), otypes=[float])(c * x * x)
        return core + hyp

    return logf


def joint_pdf_quadrature(params: BivariateShadowedParams, r1: float, r2: float,
                         tol: float = 1e-10, full_output: bool = False):
    """Reference joint PDF from the single integral over the shared amplitude.

    Integrates ``x exp(-b x^2) I0(2 r1 x/A) I0(2 r2 x/A) 1F1(m; 1; c x^2)``
    with adaptive Gauss-Kronrod quadrature.  The integrand is evaluated
    through ``i0e`` and a rescaling by its peak value so it stays finite.
    Independent of the series coefficients; used as the oracle for
    :func:`joint_pdf_closed`.
    """
    params.require_interior()
    r1 = float(r1)
    r2 = float(r2)
    if r1 < 0 or r2 < 0:
        raise ValueError("envelopes must be nonnegative")
    if r1 == 0.0 or r2 == 0.0:
        return (0.0, 0.0) if full_output else 0.0
    logf = _quadrature_log_integrand(params, r1, r2)
    sigma = params.sigma
    x_span = 2.0 * max(r1, r2) + 4.0 * sigma * math.sqrt(1.0 + params.k_factor) + 10.0 * sigma
    xs = np.linspace(0.0, x_span, 2001)[1:]
    lv = logf(xs)
    top = int(np.argmax(lv))
    peak = lv[top]
    while lv[-1] > peak - 60.0:
        x_span *= 2.0
        xs = np.linspace(0.0, x_span, 2001)[1:]
        lv = logf(xs)
        top = int(np.argmax(lv))
        peak = lv[top]
    alive = np.nonzero(lv > peak - 60.0)[0]
    lo = xs[max(alive[0] - 1, 0)] if alive[0] > 0 else 0.0
    hi = xs[min(alive[-1] + 1, xs.size - 1)]
    x_peak = xs[top]

    def f(x):
        return math.exp(float(logf(x)) - peak)

    pts = [x_peak] if lo < x_peak < hi else None
    val, err, info = integrate.quad(f, lo, hi, points=pts, epsabs=1e-15, epsrel=1e-11,
                                    limit=400, full_output=True)[:3]
    scale = math.exp(peak) if peak < _LOG_MAX else math.inf
    value, error = val * scale, err * scale
    if error > tol:
        raise QuadratureError(f"joint PDF quadrature at ({r1}, {r2}) did not converge", error)
    value = max(value, 0.0)
    return (value, error) if full_output else value


def g_term(params: BivariateShadowedParams, j: int, l: int, q: int, gamma: float) -> float:
    """Signed term ``G(j, l, q, gamma)`` of the marginal-CDF series.

    ``(-1)^j gamma^(2(l+j+1)) q! / (j! A^(j-q-1) 4 (l+j+1))`` with ``A = sigma^2 (1-rho)``.
    """
    A = _constants(params)[0]
    gamma = float(gamma)
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    if gamma == 0.0:
        return 0.0
    log_mag = (2 * (l + j + 1) * math.log(gamma) + math.lgamma(q + 1) - math.lgamma(j + 1)
               - (j - q - 1) * math.log(A) - math.log(4.0 * (l + j + 1)))
    if log_mag > _LOG_MAX:
        raise OverflowError("G term exceeds the double-precision range")
    return (-1.0) ** j * math.exp(log_mag)


def _cdf_terms(params, trunc, which, gamma):
    """Signed terms ``T[n, j]`` of the quadruple-sum marginal CDF (inner sums already folded)."""
    A = params.scatter_var
    logd = _log_margin_weights(params, trunc.ktr1, which)
    n = np.arange(trunc.ktr1 + 1)[:, None]
    j = np.arange(trunc.ktr2 + 1)[None, :]
    log_t = (logd[:, None] + 2 * (n + j + 1) * math.log(gamma) - sp.gammaln(j + 1.0)
             - j * math.log(A) - np.log(4.0 * (n + j + 1)))
    if np.max(log_t) > _LOG_MAX:
        raise OverflowError("marginal CDF series term exceeds the double-precision range")
    return np.where(j % 2 == 0, 1.0, -1.0) * np.exp(log_t)


DIAGNOSTIC_ACCURACY = SeriesAccuracy(max_terms=2000, rel_tol=1e-6)


def _alternating_diagnostic(by_order, raw, accuracy):
    """Validity metadata for an alternating series summed to ``raw``."""
    scale = max(abs(raw), 1e-300)
    max_ratio = float(np.max(np.abs(by_order)) / scale) if by_order.size else 0.0
    tail_ratio = float(abs(by_order[-1]) / scale) if by_order.size else 0.0
    return {
        "raw": raw,
        "max_term_ratio": max_ratio,
        "tail_ratio": tail_ratio,
        "valid": bool(max_ratio <= 10.0 and tail_ratio <= accuracy.rel_tol),
    }


def marginal_cdf(params: BivariateShadowedParams, trunc: TruncationOrders, which, gamma,
                 full_output: bool = False, accuracy: SeriesAccuracy = DIAGNOSTIC_ACCURACY):
    """Marginal CDF ``F_{R_which}(gamma)`` from the quadruple power series.

    The exponential of the integrated envelope is expanded to order
    ``trunc.ktr2``; the resulting alternating series is summed with exactly
    rounded addition.  The result is clamped to ``[0, 1]``.

    With ``full_output=True`` a second value is returned: a dict with the raw
    (unclamped) sum and a ``valid`` flag that is False when the largest
    order-``j`` contribution exceeds ten times the result or the last one
    exceeds ``accuracy.rel_tol`` times the result.
    """
    which = as_uav(which)
    params.require_interior()
    gamma = float(gamma)
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    if gamma == 0.0:
        info = {"raw": 0.0, "max_term_ratio": 0.0, "tail_ratio": 0.0, "valid": True}
        return (0.0, info) if full_output else 0.0
    terms = _cdf_terms(params, trunc, which, gamma)
    raw = math.fsum(terms.ravel())
    value = min(max(raw, 0.0), 1.0)
    if not full_output:
        return value
    return value, _alternating_diagnostic(terms.sum(axis=0), raw, accuracy)


def marginal_cdf_gamma_form(params: BivariateShadowedParams, trunc, which, gamma) -> float:
    """Marginal CDF with the inner envelope integral done exactly.

    Uses the same collapsed coefficients as :func:`marginal_cdf` but
    ``int_0^gamma r^(2n+1) exp(-r^2/A) dr = A^(n+1) n!/2 * P(n+1, gamma^2/A)``
    in place of the truncated exponential expansion, so all terms are
    positive.  ``trunc.ktr2`` is unused.
    """
    which = as_uav(which)
    params.require_interior()
    gamma = float(gamma)
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    if gamma == 0.0:
        return 0.0
    ktr1 = _resolve_ktr1(trunc)
    A = params.scatter_var
    logd = _log_margin_weights(params, ktr1, which)
    n = np.arange(ktr1 + 1)
    log_w = logd + (n + 1) * math.log(A) + sp.gammaln(n + 1.0) - math.log(4.0)
    p = sp.gammainc(n + 1.0, gamma * gamma / A)
    value = math.fsum(np.exp(log_w) * p)
    return min(max(value, 0.0), 1.0)


def _log_hyp1f1_b1_array(m, z):
    z = np.asarray(z, dtype=float)
    with np.errstate(over="ignore"):
        val = sp.hyp1f1(m, 1.0, z)
    out = np.empty_like(z)
    ok = np.isfinite(val) & (val > 0)
    out[ok] = np.log(val[ok])
    bad = ~ok
    # Kummer: 1F1(m;1;z) = e^z 1F1(1-m;1;-z)
    out[bad] = z[bad] + np.log(sp.hyp1f1(1.0 - m, 1.0, -z[bad]))
    return out


def _composite_legendre(hi, panels, order):
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    return (mid[:, None] + half[:, None] * x).ravel(), (half[:, None] * w).ravel()


def marginal_cdf_quadrature(params: BivariateShadowedParams, which, gamma, tol=1e-10,
                            panels: int = 48, order: int = 12) -> float:
    """Marginal CDF from the integral form of the joint PDF, without the series.

    The outer integral over ``r_which in [0, gamma]`` is adaptive.  For each
    outer node the other envelope and the shared amplitude are integrated
    on a composite Gauss-Legendre tensor grid over ``[0, 8 sigma sqrt(1+K)]^2``.
    Slow compared with the series; an oracle only.
    """
    params.require_interior()
    as_uav(which)  # the model is exchangeable, so only validation is needed
    gamma = float(gamma)
    if gamma <= 0:
        return 0.0
    s2 = params.sigma ** 2
    rho, m, K = params.rho, params.m, params.k_factor
    A = s2 * (1.0 - rho)
    c = K / (s2 * rho * (rho * m + K)) if K > 0 else 0.0
    log_pref = (math.log(8.0) + m * math.log(m * rho / (m * rho + K))
                - math.log(params.sigma ** 6 * rho * (1.0 - rho) ** 2))
    hi = 8.0 * params.sigma * math.sqrt(1.0 + K)
    x, wx = _composite_legendre(hi, panels, order)
    r2, w2 = _composite_legendre(hi, panels, order)
    log_x = np.log(x) - x ** 2 / (s2 * rho) + _log_hyp1f1_b1_array(m, c * x * x)
    log_r2 = np.log(r2)[:, None] - (r2[:, None] - x[None, :]) ** 2 / A + np.log(sp.i0e(2.0 * r2[:, None] * x[None, :] / A))
    base = log_r2 + log_x[None, :] + log_pref

    def density(r1):
        if r1 <= 0.0:
            return 0.0
        lg = base + math.log(r1) - (r1 - x[None, :]) ** 2 / A + np.log(sp.i0e(2.0 * r1 * x[None, :] / A))
        return float(w2 @ np.exp(lg) @ wx)

    val, err = integrate.quad(density, 0.0, gamma, epsabs=1e-15, epsrel=tol, limit=200)
    return val


def _pair_from_draws(params, normals, los_power):
    """Envelopes from standard normals of shape ``(3, 2, ...)`` and LOS powers ``|Z|^2``.

    ``normals[k]`` holds the real and imaginary parts of ``X_k`` before
    scaling by ``sqrt(1/2)``.  The phase of ``Z`` is immaterial because the
    Gaussian terms are circular, so ``Z`` enters as a real amplitude.
    """
    s = params.sigma
    g = normals * math.sqrt(0.5)
    z = np.sqrt(los_power)
    common_re = s * math.sqrt(params.rho) * g[0, 0] + z
    common_im = s * math.sqrt(params.rho) * g[0, 1]
    own = s * math.sqrt(1.0 - params.rho)
    r1 = np.hypot(own * g[1, 0] + common_re, own * g[1, 1] + common_im)
    r2 = np.hypot(own * g[2, 0] + common_re, own * g[2, 1] + common_im)
    return r1, r2


def _los_power(params, rng, shape):
    if params.omega_n == 0.0:
        return np.zeros(shape)
    return rng.gamma(params.m, params.omega_n / params.m, shape)


def sample_pair(params: BivariateShadowedParams, rng=None, size=None):
    """Draw correlated envelopes ``(|H_1|, |H_2|)``.

    ``rng`` is a :class:`numpy.random.Generator` (or anything accepted by
    :func:`numpy.random.default_rng`).  Returns two floats when ``size`` is
    None, else two arrays of that shape.
    """
    rng = np.random.default_rng(rng)
    shape = () if size is None else (size if isinstance(size, tuple) else (int(size),))
    normals = rng.standard_normal((3, 2) + shape)
    r1, r2 = _pair_from_draws(params, normals, _los_power(params, rng, shape))
    if size is None:
        return float(r1), float(r2)
    return r1, r2
