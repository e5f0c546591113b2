import math

import numpy as np
import pytest

from uavnoma.bivariate import BivariateShadowedParams, TruncationOrders
from uavnoma.checks import noma_outage_quadrature, oma_outage_quadrature
from uavnoma.geometry import GeometryParams
from uavnoma.outage import (
    ESCALATION,
    CertainOutageError,
    LinkConfig,
    OutageResult,
    noma_outage_analytic,
    noma_outage_gamma_form,
    noma_threshold,
    noma_thresholds,
    oma_outage_analytic,
    oma_outage_gamma_form,
    oma_threshold,
)
from uavnoma.univariate import UnivariateShadowedParams

import oracles

BV = BivariateShadowedParams.from_db(10.0)
UV = UnivariateShadowedParams.from_db(10.0, 10.0)
GEO = GeometryParams()
TABLE = TruncationOrders(30, 10)


def link(p_db=10.0, **kw):
    return LinkConfig.from_db(p_db, p_db, **kw)


def test_link_config():
    cfg = link(10.0)
    assert cfg.p_g1 == pytest.approx(10.0) and cfg.p_g2 == pytest.approx(10.0)
    assert cfg.a_gs2 == 0.5 and cfg.r_noma == 0.05
    with pytest.raises(ValueError):
        LinkConfig(a_gs1=1.0)
    with pytest.raises(ValueError):
        LinkConfig(beta=-0.1)


def test_thresholds():
    g, g1, g2 = noma_thresholds(link())
    assert g == pytest.approx(0.035265, abs=1e-6)
    assert g1 == pytest.approx(0.08400, abs=1e-5)
    assert g1 == pytest.approx(math.sqrt(g / (10 * (0.5 - 0.5 * 0.01 * g))), rel=1e-14)
    assert g2 == pytest.approx(math.sqrt(g / (10 * (0.5 - 0.5 * g))), rel=1e-14)
    assert oma_threshold(link()) == pytest.approx(0.071773, abs=1e-6)
    assert oma_threshold(link(r_oma=1.0)) == 1.0
    g0 = noma_thresholds(link(beta=0.0))
    assert g0[1] == pytest.approx(math.sqrt(g0[0] / (10 * 0.5)), rel=1e-15)


def test_certain_outage():
    # gamma_noma = 1.2 makes the UAV-2 SINR ceiling a2/a1 = 1 unreachable
    cfg = link(r_oma=2 * math.log2(2.2))
    with pytest.raises(CertainOutageError) as err:
        noma_threshold(cfg, 2)
    assert err.value.uav == 2
    res = noma_outage_analytic(BV, GEO, cfg, TABLE, 2)
    assert res.probability == 1.0 and res.diagnostic["certain_outage"]


def test_outage_result_validation():
    with pytest.raises(ValueError):
        OutageResult(1.5, "analytic", TABLE)
    with pytest.raises(ValueError):
        OutageResult(0.5, "guess", TABLE)
    assert OutageResult(0.1, "monte_carlo", 10, {"ci95": 0.01}).ci95 == 0.01


@pytest.mark.parametrize("p_db", [0.0, 10.0, 20.0])
def test_converged_outage_matches_independent_route(p_db):
    cfg = link(p_db)
    for u in (1, 2):
        ref = oracles.noma_outage(BV, GEO, noma_threshold(cfg, u), u)
        assert noma_outage_gamma_form(BV, GEO, cfg, 400, u).probability == pytest.approx(ref, rel=1e-8)
        ref = oracles.oma_outage(UV, GEO, oma_threshold(cfg), cfg.p_g(u), u)
        assert oma_outage_gamma_form(UV, GEO, cfg, 200, u).probability == pytest.approx(ref, rel=1e-10)


def test_table_truncation_close_at_ten_db():
    cfg = link(10.0)
    for u in (1, 2):
        fixed = noma_outage_analytic(BV, GEO, cfg, TABLE, u)
        ref = oracles.noma_outage(BV, GEO, noma_threshold(cfg, u), u)
        assert fixed.valid and fixed.trunc_used == TABLE
        assert fixed.probability == pytest.approx(ref, rel=5e-3)
        oma = oma_outage_analytic(UV, GEO, cfg, 30, u)
        assert oma.probability == pytest.approx(oracles.oma_outage(UV, GEO, oma_threshold(cfg), 10.0, u), rel=1e-10)


def test_escalation_at_low_power():
    cfg = link(0.0)
    for u in (1, 2):
        first = oma_outage_analytic(UV, GEO, cfg, 30, u)
        assert not first.valid
        esc = oma_outage_analytic(UV, GEO, cfg, 30, u, accuracy=ESCALATION)
        ref = oracles.oma_outage(UV, GEO, oma_threshold(cfg), cfg.p_g(u), u)
        assert esc.valid and esc.diagnostic["escalated"] and esc.trunc_used > 30
        assert esc.diagnostic["requested_probability"] == first.probability
        assert esc.probability == pytest.approx(ref, rel=1e-9)

        esc = noma_outage_analytic(BV, GEO, cfg, TABLE, u, accuracy=ESCALATION)
        ref = oracles.noma_outage(BV, GEO, noma_threshold(cfg, u), u)
        assert esc.valid and esc.trunc_used.ktr1 > 30 and esc.trunc_used.ktr2 == 10
        assert esc.probability == pytest.approx(ref, rel=1e-8)


def test_no_escalation_when_valid():
    cfg = link(10.0)
    a = noma_outage_analytic(BV, GEO, cfg, TABLE, 1)
    b = noma_outage_analytic(BV, GEO, cfg, TABLE, 1, accuracy=ESCALATION)
    assert a.probability == b.probability and "escalated" not in b.diagnostic


@pytest.mark.parametrize("p_db", [5.0, 10.0, 20.0])
def test_distance_average_bookkeeping(p_db):
    cfg = link(p_db)
    for u in (1, 2):
        a = noma_outage_analytic(BV, GEO, cfg, TABLE, u).diagnostic["raw"]
        assert a == pytest.approx(noma_outage_quadrature(BV, GEO, cfg, TABLE, u), abs=1e-6, rel=1e-9)
        a = oma_outage_analytic(UV, GEO, cfg, 30, u).diagnostic["raw"]
        assert a == pytest.approx(oma_outage_quadrature(UV, GEO, cfg, 30, u), abs=1e-6, rel=1e-9)


def test_vanishing_threshold_limits():
    cfg = LinkConfig(beta=0.0, p_g1=1e12, p_g2=1e12)
    assert noma_outage_analytic(BV, GEO, cfg, TABLE, 1).probability < 1e-9
    assert oma_outage_analytic(UV, GEO, LinkConfig(r_oma=1e-9), 30, 1).probability < 1e-9


def _sweep(values, f):
    return np.array([f(v) for v in values])


def test_power_sweep_shape():
    powers = np.linspace(0.0, 40.0, 20)
    curves = {}
    for u in (1, 2):
        curves["noma", u] = _sweep(powers, lambda p: noma_outage_analytic(BV, GEO, link(p), TABLE, u,
                                                                          accuracy=ESCALATION).probability)
        curves["oma", u] = _sweep(powers, lambda p: oma_outage_analytic(UV, GEO, link(p), 30, u,
                                                                        accuracy=ESCALATION).probability)
    for c in curves.values():
        assert np.all(np.diff(c) <= 0)
    for s in ("noma", "oma"):
        assert np.all(curves[s, 1] <= curves[s, 2])
    for u in (1, 2):
        assert np.all(curves["noma", u] < curves["oma", u])


def test_shadowing_sweep_shape():
    m_bar = [0.5, 1.0, 2.0, 5.0, 10.0, 20.0]
    cfg = link(10.0)
    for u in (1, 2):
        noma = [noma_outage_analytic(BivariateShadowedParams.from_db(10.0, m=m), GEO, cfg, TABLE, u,
                                     accuracy=ESCALATION).probability for m in m_bar]
        oma = [oma_outage_analytic(UnivariateShadowedParams.from_db(10.0, m), GEO, cfg, 30, u,
                                   accuracy=ESCALATION).probability for m in m_bar]
        assert np.all(np.diff(noma) <= 0) and np.all(np.diff(oma) <= 0)


def test_residual_interference_sensitivity():
    betas = [0.0, 0.01, 0.05, 0.1, 0.3]
    vals = [noma_outage_analytic(BV, GEO, link(10.0, beta=b), TABLE, 1, accuracy=ESCALATION).probability
            for b in betas]
    assert np.all(np.diff(vals) >= 0)
    high = noma_outage_analytic(BV, GEO, link(40.0), TABLE, 1, accuracy=ESCALATION).probability
    assert high < 1e-6
