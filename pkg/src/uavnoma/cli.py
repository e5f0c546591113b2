"""Command-line front end.

Subcommands::

    uavnoma pdf-compare  --config run.ini --output pdf.csv
    uavnoma outage-sweep --config run.ini --output sweep.csv --scheme both --workers 4
    uavnoma validate     --config run.ini

Every subcommand returns 0 on success.  ``outage-sweep`` exits 1 when an
analytic/MC pair disagrees, ``pdf-compare`` exits 1 when the grid error is
too large, and invalid configuration exits 2 before any computation.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import bivariate as _bv
from .bivariate import QuadratureError, TruncationOrders
from .common import Uav
from .config import RunConfig
from .montecarlo import mc_noma_counts, mc_oma_outage, binomial_ci95
from .outage import ESCALATION, noma_outage_analytic, oma_outage_analytic

__all__ = [
    "PDF_COLUMNS",
    "PDF_TOLERANCE",
    "sweep_columns",
    "sweep_rows",
    "cmd_pdf_compare",
    "cmd_outage_sweep",
    "cmd_validate",
    "main",
]

PDF_COLUMNS = ("r1", "r2", "pdf_closed", "pdf_quadrature", "abs_diff")
PDF_TOLERANCE = 1e-4
PDF_GRID = np.linspace(0.0, 3.0, 30)

SCHEMES = {"noma": ("noma",), "oma": ("oma",), "both": ("noma", "oma")}
_SWEEP_FIELDS = ("analytic", "mc", "ci95", "valid", "trunc", "agree")
# analytic/MC comparison is only meaningful above this level
AGREE_FLOOR = 1e-3
AGREE_REL = 0.05


# ---------------------------------------------------------------------------
# formatting


def fmt_prob(p):
    if p is None:
        return ""
    if p < 1e-3:
        return f"{p:.6e}"
    return f"{p:.9f}"


def fmt_float(x):
    return "" if x is None else f"{x:.12g}"


def fmt_flag(b):
    return "" if b is None else ("1" if b else "0")


def fmt_trunc(t):
    if isinstance(t, TruncationOrders):
        return f"{t.ktr1}/{t.ktr2}"
    return str(t)


# ---------------------------------------------------------------------------
# pdf-compare


def pdf_compare_rows(config: RunConfig):
    """Grid rows ``(r1, r2, closed, quadrature, diff)`` over ``[0, 3]^2``."""
    params = config.bivariate()
    params.require_interior()
    trunc = TruncationOrders(config.truncation.pdf_ktr1, config.truncation.ktr2)
    r1, r2 = np.meshgrid(PDF_GRID, PDF_GRID, indexing="ij")
    closed = _bv.joint_pdf_closed(params, trunc, r1, r2)
    rows = []
    for a in range(PDF_GRID.size):
        for b in range(PDF_GRID.size):
            x, y = float(PDF_GRID[a]), float(PDF_GRID[b])
            q = _bv.joint_pdf_quadrature(params, x, y)
            c = float(closed[a, b])
            rows.append((x, y, c, q, abs(c - q)))
    return rows


def cmd_pdf_compare(config: RunConfig, output_path) -> int:
    try:
        rows = pdf_compare_rows(config)
    except (OverflowError, QuadratureError) as err:
        print(f"pdf-compare failed: {err}", file=sys.stderr)
        return 1
    with open(output_path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(PDF_COLUMNS)
        for x, y, c, q, d in rows:
            w.writerow((repr(x), repr(y), repr(c), repr(q), repr(d)))
    worst = max(r[4] for r in rows)
    status = "PASS" if worst < PDF_TOLERANCE else "FAIL"
    print(f"pdf-compare: max |closed - quadrature| = {worst:.3e} ({status}, tolerance {PDF_TOLERANCE:g})")
    return 0 if worst < PDF_TOLERANCE else 1


# ---------------------------------------------------------------------------
# outage-sweep


def sweep_columns(scheme="both"):
    """Fixed CSV header for a sweep over ``scheme``."""
    cols = ["point", "variable", "value"]
    for s in SCHEMES[scheme]:
        for u in (1, 2):
            cols += [f"{s}_uav{u}_{f}" for f in _SWEEP_FIELDS]
    if scheme == "both":
        cols += ["noma_oma_ratio_uav1", "noma_oma_ratio_uav2"]
    return cols


def _agree(analytic, mc, ci):
    if mc is None or analytic <= AGREE_FLOOR:
        return None
    return abs(analytic - mc) <= max(AGREE_REL * analytic, ci)


def evaluate_point(config: RunConfig, scheme: str, index: int, value: float):
    """All outage numbers for one sweep point, as a dict keyed like the CSV."""
    cfg_point = config.at(config.sweep.variable, value)
    params = cfg_point.bivariate()
    uparams = cfg_point.univariate()
    geo = cfg_point.geometry_params()
    link = cfg_point.link_config()
    trunc = cfg_point.trunc()
    plan = cfg_point.sim_plan()
    acc = ESCALATION if cfg_point.truncation.escalate else None
    out = {"point": index, "variable": config.sweep.variable, "value": value}

    if "noma" in SCHEMES[scheme]:
        params.require_interior()
        counts = None
        if plan is not None:
            counts = mc_noma_counts(params, geo, link, plan, key=(index,))
        for u in (Uav.UAV1, Uav.UAV2):
            res = noma_outage_analytic(params, geo, link, trunc, u, accuracy=acc)
            mc = ci = None
            if counts is not None:
                mc = counts[u - 1] / plan.samples
                ci = binomial_ci95(counts[u - 1], plan.samples)
            _store(out, "noma", u, res, mc, ci)
    if "oma" in SCHEMES[scheme]:
        for u in (Uav.UAV1, Uav.UAV2):
            res = oma_outage_analytic(uparams, geo, link, trunc.ktr1, u, accuracy=acc)
            mc = ci = None
            if plan is not None:
                r = mc_oma_outage(uparams, geo, link, plan, u, key=(index,))
                mc, ci = r.probability, r.ci95
            _store(out, "oma", u, res, mc, ci)
    if scheme == "both":
        for u in (1, 2):
            oma = out[f"oma_uav{u}_analytic"]
            out[f"noma_oma_ratio_uav{u}"] = out[f"noma_uav{u}_analytic"] / oma if oma > 0 else None
    return out


def _store(out, s, u, res, mc, ci):
    p = f"{s}_uav{int(u)}_"
    out[p + "analytic"] = res.probability
    out[p + "mc"] = mc
    out[p + "ci95"] = ci
    out[p + "valid"] = res.valid
    out[p + "trunc"] = res.trunc_used
    out[p + "agree"] = _agree(res.probability, mc, ci or 0.0)


def sweep_rows(config: RunConfig, scheme="both", workers=1):
    """Evaluate every sweep point; rows come back in sweep order."""
    grid = list(enumerate(config.sweep.grid()))
    if workers <= 1:
        return [evaluate_point(config, scheme, i, v) for i, v in grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda iv: evaluate_point(config, scheme, *iv), grid))


def _format_row(row, columns):
    cells = []
    for c in columns:
        v = row.get(c)
        if c in ("point", "variable"):
            cells.append(str(v))
        elif c == "value" or c.startswith("noma_oma_ratio"):
            cells.append(fmt_float(v))
        elif c.endswith(("_analytic", "_mc", "_ci95")):
            cells.append(fmt_prob(v))
        elif c.endswith(("_valid", "_agree")):
            cells.append(fmt_flag(v))
        elif c.endswith("_trunc"):
            cells.append(fmt_trunc(v))
        else:
            cells.append(str(v))
    return cells


def write_sweep_csv(rows, scheme, fh):
    columns = sweep_columns(scheme)
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow(_format_row(row, columns))


def disagreements(rows, scheme="both"):
    """``(point, value, column)`` for every analytic/MC pair that fails to agree."""
    bad = []
    for row in rows:
        for s in SCHEMES[scheme]:
            for u in (1, 2):
                if row[f"{s}_uav{u}_agree"] is False:
                    bad.append((row["point"], row["value"], f"{s}_uav{u}"))
    return bad


def cmd_outage_sweep(config: RunConfig, scheme, output_path, workers: int = 1) -> int:
    if scheme not in SCHEMES:
        raise ValueError(f"scheme must be one of {sorted(SCHEMES)}, got {scheme!r}")
    try:
        rows = sweep_rows(config, scheme, workers)
    except OverflowError as err:
        print(f"outage-sweep failed: {err}", file=sys.stderr)
        return 1
    buf = io.StringIO()
    write_sweep_csv(rows, scheme, buf)
    with open(output_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())
    bad = disagreements(rows, scheme)
    for point, value, col in bad:
        print(f"disagreement at point {point} ({config.sweep.variable}={value:g}): {col}", file=sys.stderr)
    return 1 if bad else 0


# ---------------------------------------------------------------------------
# validate


def cmd_validate(config: RunConfig, samples: int = 100_000, out=None) -> int:
    from .checks import run_checks

    out = out or sys.stdout
    results = run_checks(config, samples=samples)
    width = max(len(r.name) for r in results)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  {r.detail}", file=out)
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"{len(failed)} check(s) failed: {', '.join(failed)}", file=out)
        return 1
    print(f"all {len(results)} checks passed", file=out)
    return 0


# ---------------------------------------------------------------------------
# entry point


def build_parser():
    ap = argparse.ArgumentParser(prog="uavnoma", description="Two-UAV NOMA outage analysis under correlated shadowed fading.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, output):
        p.add_argument("--config", help="INI run configuration (defaults used when omitted)")
        if output:
            p.add_argument("--output", required=True, help="CSV file to write")
        p.add_argument("--samples", type=int, help="override sim.samples")
        p.add_argument("--seed", type=int, help="override sim.seed (unsigned 64-bit)")

    common(sub.add_parser("pdf-compare", help="closed-form vs quadrature joint PDF on a 30x30 grid"), True)
    p = sub.add_parser("outage-sweep", help="analytic and Monte Carlo outage along the configured sweep")
    common(p, True)
    p.add_argument("--scheme", choices=sorted(SCHEMES), default="both")
    p.add_argument("--workers", type=int, default=1, help="sweep points evaluated in parallel")
    common(sub.add_parser("validate", help="reduced-scale invariant and oracle checks"), False)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig.load(args.config) if args.config else RunConfig()
        config = config.with_overrides(samples=args.samples, seed=args.seed)
        if args.command == "pdf-compare":
            config.bivariate().require_interior()
    except (ValueError, OSError) as err:
        # DegenerateCorrelationError is a ValueError
        print(f"invalid configuration: {err}", file=sys.stderr)
        return 2
    if args.command == "pdf-compare":
        return cmd_pdf_compare(config, args.output)
    if args.command == "outage-sweep":
        return cmd_outage_sweep(config, args.scheme, args.output, workers=args.workers)
    samples = args.samples if args.samples is not None else 100_000
    return cmd_validate(config, samples=samples)


if __name__ == "__main__":
    sys.exit(main())
