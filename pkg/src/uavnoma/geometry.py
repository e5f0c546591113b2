"""Binomial-point-process placement of the two downlink UAVs.

Each UAV lies uniformly on a disc of radius ``r_a`` at altitude ``d_alt``
above the ground station.  With a minimum ground distance ``lambda_i`` the
link distance ``w`` has density ``2 w / r_a^2`` on
``[sqrt(d_alt^2 + lambda_i^2), sqrt(d_alt^2 + lambda_i^2 + r_a^2)]``, i.e.
``w^2`` is uniform on an interval of length ``r_a^2``.  Distances in km.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .common import Uav, as_uav

__all__ = ["GeometryParams", "distance_pdf", "distance_cdf", "sample_distance", "g_bar", "log_g_bar"]

_LOG_MAX = 709.782712893384


@dataclass(frozen=True)
class GeometryParams:
    r_a: float = 4.0
    d_alt: float = 0.2
    lambda_1: float = 2.0
    lambda_2: float = 3.0

    def __post_init__(self):
        if not self.r_a > 0:
            raise ValueError(f"r_a must be > 0, got {self.r_a!r}")
        if not self.d_alt > 0:
            raise ValueError(f"d_alt must be > 0, got {self.d_alt!r}")
        for name in ("lambda_1", "lambda_2"):
            lam = getattr(self, name)
            if not 0 < lam < self.r_a:
                raise ValueError(f"{name} must satisfy 0 < {name} < r_a, got {lam!r}")
        if not self.lambda_1 < self.lambda_2:
            raise ValueError(
                f"UAV-1 must be the nearer user: lambda_1 < lambda_2, got {self.lambda_1} >= {self.lambda_2}"
            )

    def min_distance(self, lam: float) -> float:
        return math.sqrt(self.d_alt ** 2 + lam ** 2)

    def lam(self, uav) -> float:
        return self.lambda_1 if as_uav(uav) is Uav.UAV1 else self.lambda_2

    def support(self, uav):
        """``(w_min, w_max)`` of the link distance for one UAV."""
        lam = self.lam(uav)
        w2 = self.d_alt ** 2 + lam ** 2
        return math.sqrt(w2), math.sqrt(w2 + self.r_a ** 2)


def distance_pdf(geo: GeometryParams, uav, w):
    w_min, w_max = geo.support(uav)
    w = np.asarray(w, dtype=float)
    out = np.where((w >= w_min) & (w <= w_max), 2.0 * w / geo.r_a ** 2, 0.0)
    return float(out) if out.ndim == 0 else out


def distance_cdf(geo: GeometryParams, uav, w):
    w_min, _ = geo.support(uav)
    w = np.asarray(w, dtype=float)
    out = np.clip((w * w - w_min ** 2) / geo.r_a ** 2, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def _distance_from_uniform(geo, uav, u):
    w_min, _ = geo.support(uav)
    return np.sqrt(w_min ** 2 + u * geo.r_a ** 2)


def sample_distance(geo: GeometryParams, uav, rng=None, size=None):
    """Inverse-CDF draw ``w = sqrt(w_min^2 + U r_a^2)`` with ``U ~ Uniform[0, 1)``."""
    rng = np.random.default_rng(rng)
    u = rng.random(size)
    w = _distance_from_uniform(geo, uav, u)
    return float(w) if size is None else w


def log_g_bar(geo: GeometryParams, lam: float, k):
    """Natural log of :func:`g_bar`; vectorised over ``k``."""
    if not 0 < lam < geo.r_a:
        raise ValueError(f"lambda must satisfy 0 < lambda < r_a, got {lam!r}")
    lo = geo.d_alt ** 2 + lam ** 2
    hi = lo + geo.r_a ** 2
    e = np.asarray(k, dtype=float) + 2.0
    return e * math.log(hi) + np.log(-np.expm1(e * math.log(lo / hi))) - np.log(geo.r_a ** 2 * e)


def g_bar(geo: GeometryParams, lam: float, k: int) -> float:
    """Distance moment ``E[w^(2(k+1))]``:

    ``((d_alt^2 + lam^2 + r_a^2)^(k+2) - (d_alt^2 + lam^2)^(k+2)) / (r_a^2 (k+2))``
    """
    if int(k) != k or k < 0:
        raise ValueError(f"k must be a nonnegative integer, got {k!r}")
    val = float(log_g_bar(geo, lam, k))
    if val > _LOG_MAX:
        raise OverflowError(f"distance moment of order {k} exceeds the double-precision range")
    return math.exp(val)
