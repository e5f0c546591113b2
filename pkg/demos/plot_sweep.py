# Optional: draw the curves from an outage-sweep CSV.  Needs matplotlib.
#   uavnoma outage-sweep --output sweep.csv
#   python3 demos/plot_sweep.py sweep.csv sweep.png
import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

src, dst = sys.argv[1], sys.argv[2] if len(sys.argv) > 2 else "sweep.png"
with open(src, newline="", encoding="utf-8") as fh:
    rows = list(csv.DictReader(fh))
x = [float(r["value"]) for r in rows]

fig, ax = plt.subplots(figsize=(6, 4))
for scheme, style in (("noma", "-"), ("oma", "--")):
    for u, color in ((1, "C0"), (2, "C3")):
        col = f"{scheme}_uav{u}"
        if col + "_analytic" not in rows[0]:
            continue
        ax.semilogy(x, [float(r[col + "_analytic"]) for r in rows], style, color=color,
                    label=f"{scheme.upper()} UAV-{u}")
        mc = [(xi, float(r[col + "_mc"])) for xi, r in zip(x, rows) if r[col + "_mc"] not in ("", "0.000000e+00")]
        if mc:
            ax.semilogy(*zip(*mc), "o", color=color, mfc="none")
ax.set_xlabel(rows[0]["variable"])
ax.set_ylabel("outage probability")
ax.grid(True, which="both", alpha=0.3)
ax.legend()
fig.tight_layout()
fig.savefig(dst, dpi=150)
print("wrote", dst)
