"""Command-line front end.

Every subcommand writes plain data files (CSV or JSON, floats with 17
significant digits) and a ``.meta.json`` sidecar describing how they were
produced. Exit codes: 0 success, 1 check or certification failure, 2 usage
or configuration error.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, certify, critical, reading
from .channel import MemoryModel, SignalProfile
from .errors import DomainError, NoAdvantage, TruncationError

SECTION = "qreading"

DEFAULTS = {
    "nb_max": "10",
    "m_max": "1e8",
    "jobs": "1",
    "ns_list": "0.01,0.1,0.5",
    "r0_grid": "0:0.99:100",
    "ns_range": "1:2.4:15",
    "sweep": "ns=0.1,0.5,1;r=0,0.3,0.7,0.95,1;nb=0,0.1,0.5;s=0.25,0.5,0.75",
    "oracle_tol": "1e-4",
    "convergence_tol": "1e-6",
    "slack": "1e-6",
    "truncation_tol": "1e-8",
}

GAIN_COLUMNS = ("M", "N_S", "r0", "r1", "N_B", "C", "Q", "J_class", "J_quant", "G")


class UsageError(Exception):
    pass


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return "%.17g" % x
    return "" if x is None else str(x)


def parse_list(spec: str) -> list[float]:
    """``"a,b,c"`` or ``"start:stop:num"`` (inclusive linspace)."""
    spec = spec.strip()
    if not spec:
        return []
    try:
        if ":" in spec:
            start, stop, num = spec.split(":")
            return [float(x) for x in np.linspace(float(start), float(stop), int(num))]
        return [float(x) for x in spec.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse grid {spec!r}: {exc}") from None


def parse_sweep(spec: str) -> dict:
    """``"ns=...;r=...;nb=...;s=..."`` into :class:`OracleSweep` keyword arguments."""
    names = {"ns": "ns_values", "r": "r_values", "nb": "nb_values", "s": "s_values"}
    out = {}
    for part in filter(None, (p.strip() for p in spec.split(";"))):
        key, sep, value = part.partition("=")
        if not sep or key.strip() not in names:
            raise UsageError(f"bad sweep entry {part!r}; expected one of {sorted(names)}=LIST")
        out[names[key.strip()]] = tuple(parse_list(value))
    return out


def load_config(path=None) -> configparser.ConfigParser:
    cfg = configparser.ConfigParser()
    cfg[SECTION] = dict(DEFAULTS)
    if path is not None:
        read = cfg.read(path)
        if not read:
            raise UsageError(f"config file {path} not found")
        unknown = set(cfg[SECTION]) - set(DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return cfg


def _option(value, cfg, key):
    """Command-line value if given (even when empty), else the config value."""
    return cfg[SECTION][key] if value is None else value


def _float(cfg, key):
    try:
        return cfg[SECTION].getfloat(key)
    except ValueError:
        raise UsageError(f"config key {key} must be a number") from None


def _write_csv(path, columns, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(row[c]) for c in columns])
    _emit(path, buf.getvalue())


def _write_json(path, obj):
    _emit(path, json.dumps(obj, indent=2, sort_keys=True, default=fmt) + "\n")


def _emit(path, text):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _sidecar(path, command, args, extra=None):
    if path is None:
        return
    meta = {
        "command": command,
        "version": __version__,
        "arguments": {k: v for k, v in vars(args).items() if k != "func"},
        "numpy": np.__version__,
    }
    meta.update(extra or {})
    Path(str(path) + ".meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True, default=str) + "\n")


# -- subcommands ------------------------------------------------------------

def cmd_gain_table(args, cfg) -> int:
    reports = reading.table_reports()
    rows = [r.row() for r in reports]
    for spec in args.row or []:
        try:
            m, ns, r0, r1, nb = spec.split(",")
            rep = reading.gain(MemoryModel(float(r0), float(r1), float(nb)), SignalProfile(int(m), float(ns)))
        except ValueError as exc:
            raise UsageError(f"bad --row {spec!r}: {exc}") from None
        rows.append(rep.row())
    _write_csv(args.out, GAIN_COLUMNS, rows)
    status = 0
    checks = []
    if args.check:
        label = {"match": "ok", "discrepancy": "DISCREPANCY (documented)", "mismatch": "MISMATCH"}
        for c in reading.check_table(reports, strict=args.strict):
            print(f"row {c.index + 1}: G = {c.gain:.6g}  printed {c.printed:g}  {label[c.status]}",
                  file=sys.stderr)
            checks.append({"row": c.index + 1, "G": c.gain, "printed": c.printed, "status": c.status})
            if not c.ok:
                status = 1
    _sidecar(args.out, "gain-table", args, {"checks": checks})
    return status


def cmd_gain_point(args, cfg) -> int:
    rep = reading.gain(MemoryModel(args.r0, args.r1, args.nb), SignalProfile(args.m, args.ns))
    _write_csv(args.out, GAIN_COLUMNS, [rep.row()])
    _sidecar(args.out, "gain-point", args, {"s_star": rep.s_star})
    return 0


def cmd_critical_curve(args, cfg) -> int:
    ns_list = parse_list(_option(args.ns, cfg, "ns_list"))
    grid = parse_list(_option(args.grid, cfg, "r0_grid"))
    if not ns_list:
        raise UsageError("--ns is empty")
    if not grid:
        raise UsageError("--grid is empty")
    nb_max = _float(cfg, "nb_max") if args.nb_max is None else args.nb_max
    m_max = _float(cfg, "m_max")
    jobs = args.jobs if args.jobs is not None else cfg[SECTION].getint("jobs")
    curves, rows = [], []
    for ns in ns_list:
        curve = critical.critical_curve(ns, grid, nb_max=nb_max, m_max=m_max, jobs=jobs)
        curves.append(curve)
        for p in curve.points:
            rows.append({"N_S": ns, "r0": p.r0, "M_real": p.m_real, "M_int": p.m_int,
                         "N_B_worst": p.nb_worst, "status": p.status})
    _write_csv(args.out, ("N_S", "r0", "M_real", "M_int", "N_B_worst", "status"), rows)
    _sidecar(args.out, "critical-curve", args, {"grids": [c.grid for c in curves]})
    if args.plot:
        _plot_curves(curves, args.plot)
    return 0


def cmd_asymptote_compare(args, cfg) -> int:
    ns_values = parse_list(_option(args.ns_range, cfg, "ns_range"))
    if not ns_values:
        raise UsageError("--ns-range is empty")
    bad = [ns for ns in ns_values if not 1.0 <= ns < 2.5]
    if bad:
        raise UsageError(f"N_S values {bad} outside [1, 2.5), where the approximation is finite")
    rows = []
    for ns in ns_values:
        try:
            m = critical.critical_m(0.0, ns, 0.0, m_max=_float(cfg, "m_max"))
        except NoAdvantage:
            m = math.inf
        approx = critical.asymptote_high_energy(ns)
        rows.append({"N_S": ns, "M_solver": m, "M_tilde": approx, "rel_diff": abs(m - approx) / m})
    _write_csv(args.out, ("N_S", "M_solver", "M_tilde", "rel_diff"), rows)
    _sidecar(args.out, "asymptote-compare", args)
    if args.plot:
        _plot_asymptote(rows, args.plot)
    return 0


def cmd_oracle_check(args, cfg) -> int:
    kwargs = parse_sweep(_option(args.sweep, cfg, "sweep"))
    sweep = certify.OracleSweep(
        **kwargs,
        tol=_float(cfg, "oracle_tol"),
        convergence_tol=_float(cfg, "convergence_tol"),
        slack=_float(cfg, "slack"),
        truncation_tol=_float(cfg, "truncation_tol"),
        dim=args.dim,
    )

    def progress(ns, nb, dim):
        print(f"N_S={ns:g} N_B={nb:g} converged at dim={dim}", file=sys.stderr)

    if args.perturb_lambda:
        with certify.perturbed_lambda(args.perturb_lambda):
            report = certify.run_oracle_sweep(sweep, progress=progress)
    else:
        report = certify.run_oracle_sweep(sweep, progress=progress)
    doc = report.to_dict()
    doc["thermal_power_deviation"] = certify.thermal_power_check()
    _write_json(args.out, doc)
    _sidecar(args.out, "oracle-check", args)
    for f in report.failures:
        print(f"FAIL {f['quantity']}: {f['max_deviation']:.3g} > {f['tol']:.3g} at {f['worst']}",
              file=sys.stderr)
    return 0 if report.passed else 1


# -- plotting (optional dependency) -----------------------------------------

def _pyplot():
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        raise UsageError("plotting needs matplotlib (pip install 'artifact[plot]')") from None
    return plt


def _plot_curves(curves, path):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5, 4))
    for c in curves:
        ok = np.isfinite(c.m_real())
        ax.semilogy(c.r0()[ok], c.m_real()[ok], label=f"$N_S$ = {c.ns:g}")
    ax.set_xlabel("$r_0$")
    ax.set_ylabel("critical $M$")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def _plot_asymptote(rows, path):
    plt = _pyplot()
    ns = [r["N_S"] for r in rows]
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot(ns, [r["M_solver"] for r in rows], "-", label="root of G = 0")
    ax.plot(ns, [r["M_tilde"] for r in rows], "--", label="approximation")
    ax.set_xlabel("$N_S$")
    ax.set_ylabel("critical $M$ at $r_0 = 0$")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


# -- entry point ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qreading", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="INI file with a [qreading] section overriding defaults")
    parser.add_argument("--show-config", action="store_true", help="print the effective configuration")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("gain-table", help="recompute the reference gain table")
    p.add_argument("--check", action="store_true", help="compare G with the printed values")
    p.add_argument("--strict", action="store_true", help="treat documented discrepancies as failures")
    p.add_argument("--row", action="append", metavar="M,NS,R0,R1,NB", help="extra row (repeatable)")
    p.add_argument("--out", help="CSV file (default stdout)")
    p.set_defaults(func=cmd_gain_table)

    p = sub.add_parser("gain-point", help="bounds and gain at one parameter point")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--ns", type=float, required=True)
    p.add_argument("--r0", type=float, required=True)
    p.add_argument("--r1", type=float, required=True)
    p.add_argument("--nb", type=float, default=0.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gain_point)

    p = sub.add_parser("critical-curve", help="worst-case critical M versus r0")
    p.add_argument("--ns", help="comma list or start:stop:num")
    p.add_argument("--grid", help="r0 grid, comma list or start:stop:num")
    p.add_argument("--nb-max", type=float)
    p.add_argument("--jobs", type=int)
    p.add_argument("--plot", help="image file for the curves")
    p.add_argument("--out")
    p.set_defaults(func=cmd_critical_curve)

    p = sub.add_parser("asymptote-compare", help="critical M at r0 = 0 against its approximation")
    p.add_argument("--ns-range", help="N_S grid in [1, 2.5)")
    p.add_argument("--plot")
    p.add_argument("--out")
    p.set_defaults(func=cmd_asymptote_compare)

    p = sub.add_parser("oracle-check", help="certify closed forms against the Fock oracle")
    p.add_argument("--sweep", help="ns=LIST;r=LIST;nb=LIST;s=LIST")
    p.add_argument("--dim", type=int, help="fixed base cutoff (disables the convergence loop)")
    p.add_argument("--perturb-lambda", type=float, default=0.0, metavar="EPS",
                   help="scale Lambda_p by 1+EPS to confirm the check can fail")
    p.add_argument("--out", help="JSON report (default stdout)")
    p.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.show_config:
            cfg.write(sys.stdout)
            return 0
        if args.command is None:
            parser.print_usage(sys.stderr)
            return 2
        return args.func(args, cfg)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TruncationError as exc:
        print(f"truncation error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
