"""Monte Carlo simulation of the two-UAV downlink.

Channels come from the correlated envelope sampler, distances from the
BPP law, and the decoders follow the SINR expressions

    UAV-1 (imperfect SIC):  a1 G1 / (beta a2 G1 + 1)
    UAV-2 (II):             a2 G2 / (a1 G2 + 1)

with ``G_i = P_i R_i^2 / d_i^2`` and unit noise power.  Samples are split
into fixed batches; batch ``b`` draws from its own stream spawned from
``SeedSequence(seed, spawn_key=key)`` so results do not depend on how many
threads process the batches.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import bivariate as _bv
from . import geometry as _geo
from . import univariate as _uv
from .common import Uav, as_uav
from .outage import LinkConfig, OutageResult, noma_threshold, oma_threshold, CertainOutageError

__all__ = [
    "SimPlan",
    "mc_noma_outage",
    "mc_noma_counts",
    "mc_oma_outage",
    "noma_indicators",
    "binomial_ci95",
]


@dataclass(frozen=True)
class SimPlan:
    samples: int = 1_000_000
    seed: int = 0
    batch_size: int = 1 << 17
    antithetic: bool = False

    def __post_init__(self):
        if int(self.samples) != self.samples or self.samples < 1:
            raise ValueError(f"samples must be a positive integer, got {self.samples!r}")
        if int(self.batch_size) != self.batch_size or self.batch_size < 1:
            raise ValueError(f"batch_size must be a positive integer, got {self.batch_size!r}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    def batches(self):
        full, rest = divmod(self.samples, self.batch_size)
        return [self.batch_size] * full + ([rest] if rest else [])


def binomial_ci95(count: int, n: int) -> float:
    p = count / n
    return 1.959963984540054 * math.sqrt(p * (1.0 - p) / n)


def _streams(plan, key):
    root = np.random.SeedSequence(plan.seed, spawn_key=tuple(int(k) for k in key))
    return root.spawn(len(plan.batches()))


def _draw(rng, shape_prefix, size, antithetic):
    """Standard normals with leading shape ``shape_prefix``; mirrored halves when antithetic."""
    if not antithetic:
        return rng.standard_normal(shape_prefix + (size,))
    half = (size + 1) // 2
    z = rng.standard_normal(shape_prefix + (half,))
    return np.concatenate([z, -z], axis=-1)[..., :size]


def _uniform(rng, lead, size, antithetic):
    if not antithetic:
        return rng.random(lead + (size,))
    half = (size + 1) // 2
    u = rng.random(lead + (half,))
    return np.concatenate([u, 1.0 - u], axis=-1)[..., :size]


def _gamma(rng, shape, scale, size, antithetic):
    if scale == 0.0:
        return np.zeros(size)
    if not antithetic:
        return rng.gamma(shape, scale, size)
    half = (size + 1) // 2
    g = rng.gamma(shape, scale, half)
    return np.concatenate([g, g])[:size]


def _noma_batch_draws(params, geo, rng, size, antithetic):
    normals = _draw(rng, (3, 2), size, antithetic)
    los = _gamma(rng, params.m, params.omega_n / params.m, size, antithetic)
    r1, r2 = _bv._pair_from_draws(params, normals, los)
    u = _uniform(rng, (2,), size, antithetic)
    d1 = _geo._distance_from_uniform(geo, Uav.UAV1, u[0])
    d2 = _geo._distance_from_uniform(geo, Uav.UAV2, u[1])
    return r1, r2, d1, d2


def _sinr(cfg, r1, r2, d1, d2):
    g1 = cfg.p_g1 * r1 * r1 / (d1 * d1)
    g2 = cfg.p_g2 * r2 * r2 / (d2 * d2)
    sinr1 = cfg.a_gs1 * g1 / (cfg.beta * cfg.a_gs2 * g1 + 1.0)
    sinr2 = cfg.a_gs2 * g2 / (cfg.a_gs1 * g2 + 1.0)
    return sinr1, sinr2


def _run(batch_fn, plan, key, workers):
    sizes = plan.batches()
    streams = _streams(plan, key)
    jobs = list(zip(sizes, streams))
    if workers <= 1:
        parts = [batch_fn(n, ss) for n, ss in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda job: batch_fn(*job), jobs))
    return np.sum(np.array(parts, dtype=np.int64), axis=0)


def mc_noma_counts(params, geo, cfg: LinkConfig, plan: SimPlan, key=(), workers: int = 1):
    """Outage counts ``(count_uav1, count_uav2)`` over ``plan.samples`` joint draws."""
    gamma = 2.0 ** cfg.r_noma - 1.0

    def batch(n, ss):
        rng = np.random.Generator(np.random.PCG64(ss))
        r1, r2, d1, d2 = _noma_batch_draws(params, geo, rng, n, plan.antithetic)
        s1, s2 = _sinr(cfg, r1, r2, d1, d2)
        return [int(np.count_nonzero(s1 < gamma)), int(np.count_nonzero(s2 < gamma))]

    c = _run(batch, plan, key, workers)
    return int(c[0]), int(c[1])


def _mc_result(count, plan):
    p = count / plan.samples
    return OutageResult(p, "monte_carlo", plan.samples,
                        {"count": count, "ci95": binomial_ci95(count, plan.samples),
                         "antithetic": plan.antithetic, "valid": True})


def mc_noma_outage(params, geo, cfg: LinkConfig, plan: SimPlan, uav, key=(), workers: int = 1) -> OutageResult:
    """Monte Carlo NOMA outage of one UAV with a 95% binomial half-width in ``diagnostic['ci95']``.

    The normal-approximation interval assumes independent samples; with
    antithetic pairs it is conservative.
    """
    uav = as_uav(uav)
    counts = mc_noma_counts(params, geo, cfg, plan, key=key, workers=workers)
    return _mc_result(counts[uav - 1], plan)


def noma_indicators(params, geo, cfg: LinkConfig, rng=None, size: int = 1):
    """Per-sample outage indicators by the SINR rule and by the envelope rule.

    Returns a dict keyed by :class:`Uav` holding ``(sinr_outage, envelope_outage)``
    boolean arrays computed from the same draws.  The envelope rule is
    ``R_i < gamma_i^* d_i``; for a UAV in certain outage it is all True.
    """
    rng = np.random.default_rng(rng)
    gamma = 2.0 ** cfg.r_noma - 1.0
    r1, r2, d1, d2 = _noma_batch_draws(params, geo, rng, size, False)
    s1, s2 = _sinr(cfg, r1, r2, d1, d2)
    out = {}
    for uav, s, r, d in ((Uav.UAV1, s1, r1, d1), (Uav.UAV2, s2, r2, d2)):
        try:
            env = r < noma_threshold(cfg, uav) * d
        except CertainOutageError:
            env = np.ones(size, dtype=bool)
        out[uav] = (s < gamma, env)
    return out


def mc_oma_outage(uparams, geo, cfg: LinkConfig, plan: SimPlan, uav, key=(), workers: int = 1) -> OutageResult:
    """Monte Carlo OMA outage ``Pr(P |h|^2 < gamma^OMA d^2)`` for one UAV."""
    uav = as_uav(uav)
    gamma = oma_threshold(cfg)
    p = cfg.p_g(uav)
    omega = uparams.k_factor / (1.0 + uparams.k_factor)

    def batch(n, ss):
        rng = np.random.Generator(np.random.PCG64(ss))
        normals = _draw(rng, (2,), n, plan.antithetic)
        los = _gamma(rng, uparams.m_shape, omega / uparams.m_shape, n, plan.antithetic)
        x = _uv._power_from_draws(uparams, p, normals, los)
        d = _geo._distance_from_uniform(geo, uav, _uniform(rng, (), n, plan.antithetic))
        return [int(np.count_nonzero(x < gamma * d * d))]

    c = _run(batch, plan, tuple(key) + (int(uav),), workers)
    return _mc_result(int(c[0]), plan)
