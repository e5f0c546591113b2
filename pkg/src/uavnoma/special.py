"""Special-function building blocks for the fading-model power series.

Everything here works on Python floats.  Products of factorials, Gamma
functions and Pochhammer symbols are formed in the log domain; the
ascending series stop adaptively according to a :class:`SeriesAccuracy`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from scipy import special as _sp

__all__ = [
    "SeriesAccuracy",
    "log_gamma",
    "pochhammer_log",
    "bessel_i0",
    "hyp1f1_integer_b1",
    "lower_incomplete_gamma_regularized",
    "sum_series",
]

# ln(sys.float_info.max)
_LOG_MAX = 709.782712893384


@dataclass(frozen=True)
class SeriesAccuracy:
    """Stopping rule for an adaptively summed series.

    A series stops once ``patience`` consecutive terms are each smaller than
    ``rel_tol`` times the running sum, or when ``max_terms`` terms have been
    added.
    """

    max_terms: int = 2000
    rel_tol: float = 1e-15
    patience: int = 3

    def __post_init__(self):
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise ValueError(f"max_terms must be a positive integer, got {self.max_terms!r}")
        if not 0.0 < self.rel_tol < 1.0:
            raise ValueError(f"rel_tol must lie in (0, 1), got {self.rel_tol!r}")
        if self.patience < 1:
            raise ValueError("patience must be >= 1")


DEFAULT_ACCURACY = SeriesAccuracy()


def sum_series(term: Callable[[int], float], accuracy: SeriesAccuracy = DEFAULT_ACCURACY) -> float:
    """Sum ``term(0) + term(1) + ...`` with compensated (exactly rounded) addition.

    Returns the partial sum at the point where the stopping rule of
    ``accuracy`` fires.
    """
    terms = []
    quiet = 0
    total = 0.0
    for k in range(accuracy.max_terms):
        t = term(k)
        terms.append(t)
        total += t
        if abs(t) < accuracy.rel_tol * abs(total):
            quiet += 1
            if quiet >= accuracy.patience:
                break
        else:
            quiet = 0
    return math.fsum(terms)


def log_gamma(x: float) -> float:
    """Natural log of the Gamma function for ``x > 0``."""
    x = float(x)
    if not x > 0.0:
        raise ValueError(f"log_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def pochhammer_log(a: float, k: int) -> float:
    """``ln (a)_k`` where ``(a)_k = Gamma(a + k) / Gamma(a)`` is the rising factorial."""
    a = float(a)
    if not a > 0.0:
        raise ValueError(f"pochhammer_log requires a > 0, got {a!r}")
    if k < 0 or int(k) != k:
        raise ValueError(f"k must be a nonnegative integer, got {k!r}")
    if k == 0:
        return 0.0
    return math.lgamma(a + k) - math.lgamma(a)


def _check_overflow(log_value: float, what: str) -> None:
    if log_value > _LOG_MAX:
        raise OverflowError(f"{what} exceeds the double-precision range (log value {log_value:.1f})")


def bessel_i0(x: float, scaled: bool = False, accuracy: SeriesAccuracy = DEFAULT_ACCURACY) -> float:
    """Modified Bessel function ``I0(x)`` from its ascending series.

    ``I0(x) = sum_k (x/2)^(2k) / (k!)^2``.  With ``scaled=True`` the result is
    ``exp(-x) * I0(x)``, which never overflows.  Each term is formed in the
    log domain so large ``x`` does not overflow intermediate powers.
    """
    x = float(x)
    if x < 0.0:
        raise ValueError(f"bessel_i0 requires x >= 0, got {x!r}")
    if x == 0.0:
        return 1.0
    shift = x if scaled else 0.0
    log_half = math.log(x / 2.0)
    # expansion point: largest term sits near k = x/2
    k_peak = int(x / 2.0)
    log_peak = 2 * k_peak * log_half - 2 * math.lgamma(k_peak + 1) - shift
    if not scaled:
        # I0(x) <= exp(x); only check when the peak term itself is too large
        _check_overflow(log_peak, f"I0({x})")
    value = sum_series(lambda k: math.exp(2 * k * log_half - 2 * math.lgamma(k + 1) - shift), accuracy)
    if math.isinf(value):
        raise OverflowError(f"I0({x}) exceeds the double-precision range")
    return value


def hyp1f1_integer_b1(m: float, x: float, scaled: bool = False,
                      accuracy: SeriesAccuracy = DEFAULT_ACCURACY) -> float:
    """Confluent hypergeometric ``1F1(m; 1; x)`` by its ascending series.

    ``1F1(m; 1; x) = sum_i (m)_i x^i / (i!)^2``.  Only the second parameter
    equal to one is supported.  ``scaled=True`` returns ``exp(-x) * 1F1``.
    """
    m = float(m)
    x = float(x)
    if m < 0.5:
        raise ValueError(f"hyp1f1_integer_b1 requires m >= 0.5, got {m!r}")
    if x < 0.0:
        raise ValueError(f"hyp1f1_integer_b1 requires x >= 0, got {x!r}")
    if x == 0.0:
        return 1.0
    shift = x if scaled else 0.0
    log_x = math.log(x)
    lg_m = math.lgamma(m)

    def log_term(i):
        return math.lgamma(m + i) - lg_m + i * log_x - 2 * math.lgamma(i + 1) - shift

    if not scaled:
        # terms peak roughly where (m + i) x = (i + 1)^2
        i_peak = int(max(0.0, (x + math.sqrt(x * x + 4 * x * (m - 1) + 4 * x)) / 2.0))
        _check_overflow(max(log_term(i_peak), log_term(max(i_peak - 1, 0))), f"1F1({m}; 1; {x})")
    value = sum_series(lambda i: math.exp(log_term(i)), accuracy)
    if math.isinf(value):
        raise OverflowError(f"1F1({m}; 1; {x}) exceeds the double-precision range")
    return value


def lower_incomplete_gamma_regularized(s: float, x: float) -> float:
    """Regularized lower incomplete gamma ``P(s, x) = gamma(s, x) / Gamma(s)``."""
    s = float(s)
    x = float(x)
    if not s > 0.0:
        raise ValueError(f"shape s must be > 0, got {s!r}")
    if x < 0.0:
        raise ValueError(f"x must be >= 0, got {x!r}")
    return float(_sp.gammainc(s, x))
