"""Command-line front end.

Exit codes: 0 when verdicts match the scenario's expectation (or the KS test
passes), 1 on a mismatch, 2 on input errors.
"""

from __future__ import annotations

import argparse
import io
import json
import sys

import numpy as np

from poextremes import __version__
from poextremes.errors import ScenarioError, UnsupportedSamplerError
from poextremes.order_checks import DIRECTIONS, ScenarioReport, run_scenario
from poextremes.scenarios import Scenario, get_scenario, load_scenario, registry

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _extreme_label(sc: Scenario, which: str) -> str:
    n = sc.n if which == "Y" else len(sc.alphas)
    k = 1 if sc.kind == "min" else n
    return f"{which}{k}:{n}"


def verdict_line(sc: Scenario, report: ScenarioReport) -> str:
    rel = {"dispersive": "disp", "star": "*"}[sc.order]
    x, y = _extreme_label(sc, "X"), _extreme_label(sc, "Y")
    text = {
        "A<=B": f"{x} <={rel} {y}",
        "A>=B": f"{x} >={rel} {y}",
        "equal": f"{x} =={rel} {y} (both directions hold)",
        "neither": f"neither: {x} and {y} are not {sc.order}-ordered",
        "inconclusive": f"inconclusive: {x} vs {y} ({sc.order})",
    }[report.outcome]
    status = "" if not report.expected else (
        " [matches expectation]" if report.matches_expectation else f" [expected {report.expected}]")
    return f"{sc.id}: {text}{status}"


# -- series ---------------------------------------------------------------------------

def series_table(sc: Scenario, report: ScenarioReport):
    s = report.series
    x = s["x"]
    t = s.get("t", x)
    if sc.order == "dispersive":
        cols = {"t": t, "x": x, "lhs": s["g_B_composed"], "rhs": s["f_A"], "diff": s["difference"]}
    else:
        cols = {"t": t, "x": x, "lhs": s["ratio"] * x, "rhs": x, "ratio": s["ratio"], "slope": s["slope"]}
    order = np.argsort(t, kind="stable")
    cols = {k: np.asarray(v, dtype=float)[order] for k, v in cols.items()}
    keep = np.all([np.isfinite(v) for v in cols.values()], axis=0)
    return {k: v[keep] for k, v in cols.items()}, int((~keep).sum())


def _header(sc: Scenario, report: ScenarioReport, grid_desc: str, tol: float, dropped: int):
    lines = [
        f"scenario: {sc.id}",
        f"figure: {sc.figure or '-'}",
        f"description: {sc.description}",
        f"grid: {grid_desc}",
        f"tolerance: {tol:g}",
        f"tool: poextremes {__version__}",
        f"verdict: {verdict_line(sc, report)}",
    ]
    if dropped:
        lines.append(f"dropped non-finite rows: {dropped}")
    return lines


def render_csv(header, cols) -> str:
    buf = io.StringIO()
    for line in header:
        buf.write(f"# {line}\n")
    buf.write(",".join(cols) + "\n")
    arr = np.column_stack(list(cols.values())) if cols else np.empty((0, 0))
    for row in arr:
        buf.write(",".join("%.17g" % v for v in row) + "\n")
    return buf.getvalue()


def _verdict_dict(v):
    return {
        "status": str(v.status),
        "max_violation": v.max_violation,
        "tight": v.tight,
        "note": v.note,
        "witnesses": [[_plain(loc), val] for loc, val in v.witnesses[:50]],
        "witness_count": len(v.witnesses),
    }


def _plain(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def report_dict(sc: Scenario, report: ScenarioReport) -> dict:
    out = {
        "scenario": sc.id,
        "figure": sc.figure,
        "theorem": report.theorem,
        "order": report.order,
        "kind": sc.kind,
        "outcome": report.outcome,
        "expected": report.expected,
        "matches_expectation": report.matches_expectation,
        "quadrant": report.quadrant,
        "verdict": verdict_line(sc, report),
        "checks": {d: _verdict_dict(report.checks[d].verdict) for d in DIRECTIONS},
        "hypotheses": [
            {"name": h.name, "status": str(h.verdict.status), "evidence": h.evidence}
            for h in report.hypotheses.hypotheses
        ],
        "hypotheses_pass": report.hypotheses_hold,
        "notes": list(sc.notes),
    }
    if report.quantile_checks is not None:
        out["quantile_checks"] = {d: _verdict_dict(report.quantile_checks[d].verdict) for d in DIRECTIONS}
        out["criteria_agree"] = report.criteria_agree
    return out


def render_report_text(sc: Scenario, report: ScenarioReport) -> str:
    lines = [f"scenario {sc.id}" + (f" ({sc.figure})" if sc.figure else ""), f"  {sc.description}"]
    for note in sc.notes:
        lines.append(f"  note: {note}")
    lines.append(f"hypotheses of result {report.theorem}:")
    width = max(len(h.name) for h in report.hypotheses.hypotheses)
    for h in report.hypotheses.hypotheses:
        mark = "PASS" if h.holds else "FAIL"
        lines.append(f"  {h.name:<{width}}  {mark:<4}  {h.evidence}")
    lines.append(f"  all pass: {report.hypotheses_hold}")
    lines.append(f"{sc.order} order checks:")
    for label, checks in (("density" if sc.order == "dispersive" else "ratio", report.checks),
                          ("quantile-spread", report.quantile_checks)):
        if checks is None:
            continue
        for d in DIRECTIONS:
            v = checks[d].verdict
            extra = f", {len(v.witnesses)} witnesses" if v.witnesses else ""
            tight = ", equality within tolerance" if v.tight else ""
            lines.append(f"  [{label}] X {d.replace('A', '').replace('B', '')} Y: {v.status}{extra}{tight}")
            for loc, val in v.witnesses[:3]:
                lines.append(f"      at {_plain(loc)}: {val:.6g}")
    lines.append(f"outcome: {report.outcome}; {report.quadrant}")
    lines.append(verdict_line(sc, report))
    return "\n".join(lines) + "\n"


def _emit(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _plot(path, sc, cols):
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        raise InputError("--plot needs matplotlib (pip install 'artifact[plot]')") from None
    key = "diff" if sc.order == "dispersive" else "slope"
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(cols["t"], cols[key], lw=1)
    ax.axhline(0.0, color="0.5", lw=0.5)
    ax.set_xlabel("t")
    ax.set_ylabel(key)
    ax.set_title(f"{sc.id} ({sc.figure or sc.order})")
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


# -- commands -------------------------------------------------------------------------

def _run(sc: Scenario, args):
    grid = sc.grid(args.grid_points)
    tol = args.tol if args.tol is not None else sc.tol
    return grid, tol, run_scenario(sc, grid=grid, tol=tol)


def cmd_reproduce(args) -> int:
    try:
        sc = get_scenario(args.figure)
    except KeyError as exc:
        raise InputError(exc.args[0]) from None
    grid, tol, report = _run(sc, args)
    cols, dropped = series_table(sc, report)
    if args.format == "structured":
        doc = report_dict(sc, report)
        doc["grid"] = grid.describe()
        doc["series"] = {k: v.tolist() for k, v in cols.items()}
        _emit(json.dumps(doc, indent=1) + "\n", args.out)
    else:
        _emit(render_csv(_header(sc, report, grid.describe(), tol, dropped), cols), args.out)
    if args.plot:
        _plot(args.plot, sc, cols)
    print(verdict_line(sc, report), file=sys.stdout if args.out else sys.stderr)
    return EXIT_OK if report.matches_expectation else EXIT_MISMATCH


def cmd_check(args) -> int:
    sc = load_scenario(args.file)
    _, _, report = _run(sc, args)
    if args.format == "structured":
        text = json.dumps(report_dict(sc, report), indent=1) + "\n"
    else:
        text = render_report_text(sc, report)
    _emit(text, args.out)
    if args.plot:
        _plot(args.plot, sc, series_table(sc, report)[0])
    return EXIT_OK if report.matches_expectation else EXIT_MISMATCH


def cmd_sample(args) -> int:
    from poextremes import oracle_mc

    sc = load_scenario(args.file)
    if args.n < 1:
        raise InputError("--n must be positive")
    if args.seed < 0:
        raise InputError("--seed must be non-negative")
    spec = sc.sample_x if args.sample == "x" else sc.sample_y
    dist = sc.het if args.sample == "x" else sc.hom
    batch = oracle_mc.sample(spec, args.n, args.seed, sc.kind)
    values = batch.extremes(sc.kind)
    d = oracle_mc.ks_distance(values, dist)
    crit = oracle_mc.ks_critical(args.n)
    ok = d < crit
    probs = np.linspace(0.005, 0.995, 199)
    x = np.unique(np.quantile(values, probs))
    cols = {"x": x, "empirical": oracle_mc.empirical_cdf(values, x),
            "analytic": np.asarray(dist.cdf(x), dtype=float)}
    ks_line = f"ks: D={d:.6g} critical={crit:.6g} (level 0.01) {'PASS' if ok else 'FAIL'}"
    if args.format == "structured":
        doc = {"scenario": sc.id, "sample": args.sample, "kind": sc.kind, "N": args.n,
               "seed": args.seed, "ks": d, "critical": crit, "pass": bool(ok),
               "series": {k: v.tolist() for k, v in cols.items()}}
        _emit(json.dumps(doc, indent=1) + "\n", args.out)
    else:
        header = [f"scenario: {sc.id}", f"sample: {args.sample} ({sc.kind} of n={spec.n})",
                  f"N: {args.n}", f"seed: {args.seed}", f"tool: poextremes {__version__}", ks_line]
        _emit(render_csv(header, cols), args.out)
    print(f"{sc.id}: {ks_line}", file=sys.stdout if args.out else sys.stderr)
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_list(args) -> int:
    reg = registry()
    if args.format == "structured":
        doc = [{"id": sc.id, "figure": sc.figure, "kind": sc.kind, "order": sc.order,
                "theorem": sc.theorem, "expected": sc.expected, "description": sc.description}
               for sc in reg.values()]
        _emit(json.dumps(doc, indent=1) + "\n", args.out)
        return EXIT_OK
    lines = [f"{'id':<8} {'figure':<7} {'kind':<4} {'order':<10} {'result':<6} {'expected':<8} description"]
    for sc in reg.values():
        lines.append(f"{sc.id:<8} {sc.figure or '-':<7} {sc.kind:<4} {sc.order:<10} "
                     f"{sc.theorem:<6} {sc.expected or '-':<8} {sc.description}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 10:
        raise argparse.ArgumentTypeError("need at least 10 grid points")
    return v


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid-points", type=_positive_int, default=2000,
                        help="grid size (default 2000)")
    common.add_argument("--tol", type=_positive_float, default=None,
                        help="base tolerance (default: the scenario's, 1e-8)")
    common.add_argument("--out", help="write output to this path instead of stdout")
    common.add_argument("--format", choices=("csv", "structured"), default="csv",
                        help="csv series / text report, or structured JSON")
    common.add_argument("--plot", metavar="SVG", help="also write an SVG plot (needs matplotlib)")

    p = argparse.ArgumentParser(prog="poextremes",
                                description="Order checks for extremes of dependent proportional-odds samples.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("reproduce", parents=[common], help="emit the series of a registry scenario")
    r.add_argument("figure", help="figure alias (fig1a..fig6) or scenario id")
    r.set_defaults(func=cmd_reproduce)

    c = sub.add_parser("check", parents=[common], help="run a scenario file")
    c.add_argument("file")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("sample", parents=[common], help="Monte Carlo check of a scenario's extreme law")
    s.add_argument("file")
    s.add_argument("--n", type=int, default=100_000, help="number of simulated samples")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--sample", choices=("x", "y"), default="x",
                   help="simulate the heterogeneous (x) or homogeneous (y) sample")
    s.set_defaults(func=cmd_sample)

    ls = sub.add_parser("list-scenarios", parents=[common], help="list registry scenarios")
    ls.set_defaults(func=cmd_list)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (InputError, ScenarioError, UnsupportedSamplerError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
