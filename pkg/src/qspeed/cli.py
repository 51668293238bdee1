"""Command-line front end.

    qspeed constants [--tol 1e-13] [--format text|json]
    qspeed bounds STATE.json [--epsilon 0] [--hbar H] [--format text|json]
    qspeed crossing STATE.json [--epsilon 0] [--t-max T] [--tol 1e-9]
    qspeed table1 [--n-max 3] [--format text|csv|json]
    qspeed scan STATE.json --t-max T [--steps 200]
    qspeed fig1 [--x-max 6.283...] [--steps 400]
    qspeed mc [--a 0 --b 1 --levels 1000 --trials 100 --seed 0]
    qspeed gfuncs [--steps 100]
    qspeed make-state ROW [--n N] [--eps E] [-o FILE]

Exit codes: 0 success, 2 unreadable input, 3 domain error, 4 a numerically
located crossing came earlier than one of the bounds.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import sys
from typing import Sequence

import numpy as np

from . import catalog, statefile
from .dynamics import autocorrelation, earliest_crossing, fidelity_mixed, evolve_density
from .errors import DomainError, StateFileError
from .numerics import compute_constants
from .spectral import (
    DensityState,
    as_weights,
    bound_report,
    dispersion_stats,
    g_c,
    g_ml,
    g_teur,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_VIOLATION = 4


def _json_safe(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return "inf" if obj > 0 else ("-inf" if obj < 0 else "nan")
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, np.floating):
        return _json_safe(float(obj))
    return obj


def _emit_json(obj, out) -> None:
    json.dump(_json_safe(obj), out, indent=2)
    out.write("\n")


def _emit_text(pairs, out) -> None:
    width = max(len(k) for k, _ in pairs)
    for key, value in pairs:
        if isinstance(value, float):
            value = f"{value:.12g}"
        out.write(f"{key:<{width}}  {value}\n")


def _csv_writer(out):
    return csv.writer(out, lineterminator="\n")


def _load(args):
    state = statefile.read_state_file(args.state)
    if args.hbar is not None:
        state = dataclasses.replace(state, hbar=float(args.hbar))
        if not state.hbar > 0:
            raise DomainError("--hbar must be positive")
    return state


def cmd_constants(args, out) -> int:
    c = compute_constants(args.tol)
    record = {
        "A": c.A,
        "x_m": c.x_m,
        "chord_residual": c.chord_residual,
        "tangent_residual": c.tangent_residual,
        "tol": args.tol,
    }
    if args.format == "json":
        _emit_json(record, out)
    else:
        _emit_text(list(record.items()), out)
    return EXIT_OK


def cmd_bounds(args, out) -> int:
    state = _load(args)
    w = as_weights(state)
    stats = dispersion_stats(w)
    report = bound_report(w, args.epsilon, stats)
    if args.format == "json":
        _emit_json({"stats": stats.as_dict(), "bounds": report.as_dict()}, out)
    else:
        _emit_text(list(stats.as_dict().items()) + list(report.as_dict().items()), out)
    return EXIT_OK


def cmd_crossing(args, out) -> int:
    state = _load(args)
    report = bound_report(state, args.epsilon)
    result = earliest_crossing(state, args.epsilon, t_max=args.t_max, tol=args.tol)
    checks = [("tau_TEUR", report.tau_teur), ("tau_C", report.tau_c)]
    if args.epsilon == 0.0:
        checks.append(("tau_ML", report.tau_ml))
    verdicts = []
    for name, bound in checks:
        ok = not result.converged or result.tau >= bound * (1.0 - 10.0 * args.tol)
        verdicts.append((name, bound, ok))
    if args.format == "json":
        _emit_json(
            {
                "crossing": dataclasses.asdict(result),
                "bounds": report.as_dict(),
                "checks": {name: ("PASS" if ok else "FAIL") for name, _, ok in verdicts},
            },
            out,
        )
    else:
        if result.converged:
            _emit_text(
                [
                    ("tau", result.tau),
                    ("fidelity_at_tau", result.fidelity_at_tau),
                    ("bracket", f"[{result.bracketing_interval[0]:.15g}, {result.bracketing_interval[1]:.15g}]"),
                    ("converged", "true"),
                ],
                out,
            )
        else:
            out.write(f"no crossing found in (0, {result.bracketing_interval[1]:.12g}]\n")
            out.write("converged  false\n")
        for name, bound, ok in verdicts:
            out.write(f"tau >= {name} ({bound:.12g}): {'PASS' if ok else 'FAIL'}\n")
    return EXIT_OK if all(ok for *_, ok in verdicts) else EXIT_VIOLATION


_TABLE_COLUMNS = [
    "label", "analytic_tau", "numeric_tau", "tau_teur", "tau_ml", "tau_c",
    "ratio_teur", "ratio_ml", "ratio_c", "printed_teur", "printed_ml", "printed_c", "flags",
]


def _table_record(row: catalog.ComparisonRow) -> list:
    return [
        row.label, row.analytic_tau, row.numeric_tau, row.tau_teur, row.tau_ml, row.tau_c,
        *row.ratios, *row.printed, "; ".join(row.flags),
    ]


def cmd_table1(args, out) -> int:
    rows = catalog.table1_report(args.energy_scale, args.hbar, list(range(1, args.n_max + 1)))
    if args.format == "json":
        _emit_json([r.as_dict() for r in rows], out)
    elif args.format == "csv":
        writer = _csv_writer(out)
        writer.writerow(_TABLE_COLUMNS)
        for r in rows:
            writer.writerow([repr(float(x)) if isinstance(x, float) else x for x in _table_record(r)])
    else:
        out.write(
            f"{'state':<20}{'tau':>11}{'numeric':>11}{'TEUR/tau':>10}{'ML/tau':>10}{'C/tau':>10}\n"
        )
        for r in rows:
            out.write(
                f"{r.label:<20}{r.analytic_tau:>11.6f}{r.numeric_tau:>11.6f}"
                f"{r.ratios[0]:>10.4f}{r.ratios[1]:>10.4f}{r.ratios[2]:>10.4f}\n"
            )
            for flag in r.flags:
                out.write(f"{'':<20}! {flag}\n")
    return EXIT_OK


def cmd_scan(args, out) -> int:
    state = _load(args)
    if not args.t_max > 0 or args.steps < 1:
        raise DomainError("--t-max must be positive and --steps at least 1")
    ts = np.linspace(0.0, args.t_max, args.steps + 1)
    amp = autocorrelation(state, ts)
    if isinstance(state, DensityState):
        fid = [fidelity_mixed(state, evolve_density(state, t)) for t in ts]
    else:
        fid = np.abs(amp) ** 2
    writer = _csv_writer(out)
    writer.writerow(["t", "re_overlap", "fidelity"])
    for t, a, f in zip(ts, amp, fid):
        writer.writerow([repr(float(t)), repr(float(a.real)), repr(float(f))])
    return EXIT_OK


def cmd_fig1(args, out) -> int:
    if not args.x_max > 0 or args.steps < 1:
        raise DomainError("--x-max must be positive and --steps at least 1")
    A = compute_constants().A
    writer = _csv_writer(out)
    writer.writerow(["x", "one_minus_cos", "A_abs_x"])
    for x in np.linspace(-args.x_max, args.x_max, args.steps + 1):
        writer.writerow([repr(float(x)), repr(float(1 - math.cos(x))), repr(float(A * abs(x)))])
    return EXIT_OK


def cmd_mc(args, out) -> int:
    study = catalog.mc_dispersion_study(args.a, args.b, args.levels, args.trials, args.seed)
    record = study.as_dict()
    if args.format == "json":
        _emit_json(record, out)
        return EXIT_OK
    pairs = [(k, record[k]) for k in ("a", "b", "levels", "trials", "seed")]
    for key in ("std_dev", "above_ground", "aadm", "excess_kurtosis", "teur_over_ml", "c_over_ml"):
        est = record[key]
        if est["mean"] is None:
            pairs.append((key, "undefined"))
        else:
            err = "n/a" if est["stderr"] is None else f"{est['stderr']:.3g}"
            pairs.append((key, f"{est['mean']:.6f} +- {err}"))
    _emit_text(pairs, out)
    return EXIT_OK


def gfunc_rows(steps: int) -> list[list]:
    """Rows of ``(eps, g_teur, g_ml, g_c, g_c/g_teur, g_c/g_ml, kind)``.

    At ``eps = 1`` every g vanishes; the ratio columns then hold their
    one-sided limits 0 and pi**2/8 and ``kind`` reads ``limit``.
    """
    rows = []
    for eps in np.linspace(0.0, 1.0, steps + 1):
        eps = float(eps)
        gt, gm, gc = g_teur(eps), g_ml(eps), g_c(eps)
        if gt > 0 and gm > 0:
            rows.append([eps, gt, gm, gc, gc / gt, gc / gm, "value"])
        else:
            rows.append([eps, gt, gm, gc, 0.0, math.pi**2 / 8, "limit"])
    return rows


def cmd_gfuncs(args, out) -> int:
    if args.steps < 1:
        raise DomainError("--steps must be at least 1")
    writer = _csv_writer(out)
    writer.writerow(["eps", "g_teur", "g_ml", "g_c", "gc_over_gteur", "gc_over_gml", "ratio_kind"])
    for row in gfunc_rows(args.steps):
        writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return EXIT_OK


def cmd_make_state(args, out) -> int:
    spec = catalog.TableRowSpec(
        catalog.Row(args.row), args.energy_scale, args.hbar, eps=args.eps, n=args.n
    )
    text = statefile.dumps(catalog.make_state(spec))
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        out.write(text + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qspeed", description="Evolution-time bounds for time-independent Hamiltonians."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="tangency constants A and x_m")
    p.add_argument("--tol", type=float, default=1e-13)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_constants)

    def state_cmd(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("state", help="JSON state file")
        p.add_argument("--hbar", type=float, default=None, help="override the file's hbar")
        p.set_defaults(func=func)
        return p

    p = state_cmd("bounds", cmd_bounds, "dispersions and the three bounds")
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = state_cmd("crossing", cmd_crossing, "earliest time the fidelity drops to epsilon")
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("table1", help="bound comparison on the reference states")
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--energy-scale", type=float, default=1.0)
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.set_defaults(func=cmd_table1)

    p = state_cmd("scan", cmd_scan, "CSV of overlap and fidelity over time")
    p.add_argument("--t-max", type=float, required=True)
    p.add_argument("--steps", type=int, default=200)

    p = sub.add_parser("fig1", help="CSV of 1 - cos x against A|x|")
    p.add_argument("--x-max", type=float, default=2 * math.pi)
    p.add_argument("--steps", type=int, default=400)
    p.set_defaults(func=cmd_fig1)

    p = sub.add_parser("mc", help="uniform-spectrum Monte Carlo study")
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--levels", type=int, default=1000)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("gfuncs", help="CSV of the g functions and their ratios")
    p.add_argument("--steps", type=int, default=100)
    p.set_defaults(func=cmd_gfuncs)

    p = sub.add_parser("make-state", help="write a reference state file")
    p.add_argument("row", choices=[r.value for r in catalog.Row])
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--energy-scale", type=float, default=1.0)
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_make_state)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except StateFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
