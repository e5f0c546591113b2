# Heavier shadowing (small m) hurts both schemes; residual SIC error only hurts UAV-1.
import numpy as np

from uavnoma import (BivariateShadowedParams, GeometryParams, LinkConfig, TruncationOrders,
                     UnivariateShadowedParams, noma_outage_analytic, oma_outage_analytic)
from uavnoma.outage import ESCALATION

geo = GeometryParams()
cfg = LinkConfig.from_db(10.0, 10.0)
print(" m    NOMA-1     NOMA-2     OMA-1      OMA-2")
for m in (0.5, 1, 2, 5, 10, 20):
    bvp = BivariateShadowedParams.from_db(10.0, m=m)
    uvp = UnivariateShadowedParams.from_db(10.0, m)
    vals = [noma_outage_analytic(bvp, geo, cfg, TruncationOrders(), u, accuracy=ESCALATION).probability
            for u in (1, 2)]
    vals += [oma_outage_analytic(uvp, geo, cfg, 30, u, accuracy=ESCALATION).probability for u in (1, 2)]
    print(f"{m:4}  " + "  ".join(f"{v:.3e}" for v in vals))

bvp = BivariateShadowedParams.from_db(10.0)
for beta in np.linspace(0.0, 0.3, 4):
    for p_db in (10.0, 40.0):
        c = LinkConfig.from_db(p_db, p_db, beta=beta)
        p1 = noma_outage_analytic(bvp, geo, c, TruncationOrders(), 1, accuracy=ESCALATION).probability
        print(f"beta={beta:.2f}  P={p_db:4.0f} dB  UAV-1 outage {p1:.3e}")
