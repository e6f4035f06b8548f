"""Command-line entry point.

Subcommands::

    ec compute --n 3 [--basis raw|m|s|e|h|p]
    ec verify-symmetry --max-n 7
    ec expand --n 3 --basis schur --format json|csv|text
    ec cluster xvar --n 6 --c 2 --route recurrence|closed
    ec cluster chi --n 5 --c 3 [--e1 1 --e2 2] --route all
    ec cluster cross-check --max-n 8 --c 2,3 --format json
    ec cluster identities --eq12-count 500 --stfact-count 200 --seed 7

Exit codes: 0 = all checks passed, 1 = a verification check failed or a
route disagreed (the report is still written), 2 = usage error.

Machine formats (json/csv) are byte-stable for a fixed config and seed;
wall-clock timings are only included with --timings.  A config file in
key=value form can pre-set any global flag (command-line wins); the
EC_JOBS environment variable sets the default worker count.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
import time
from dataclasses import dataclass, field

from . import __version__
from .cluster import (
    ClusterParams,
    binomial_identity_check,
    chi_closed_form,
    chi_expanded,
    chi_from_recurrence,
    chi_small_e1,
    cross_check,
    ec_bridge,
    stfact_check,
    xvar_closed_form,
    xvar_recurrence,
)
from .combinatorics import a_seq
from .ecpoly import check_symmetry, ec_poly
from .errors import ECAlgError
from .symfunc import BASES, expand, sign_coherency

N_GUARD = 8

_BASIS_ALIASES = {
    "m": "m", "monomial": "m",
    "s": "s", "schur": "s",
    "e": "e", "elementary": "e",
    "h": "h", "homogeneous": "h", "complete": "h",
    "p": "p", "powersum": "p", "power-sum": "p",
}


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass
class CheckRecord:
    check_id: str
    inputs: dict
    status: str  # pass | fail | observation
    witness: dict = field(default_factory=dict)
    wall_time: float = 0.0


@dataclass
class VerificationReport:
    config: dict
    records: list = field(default_factory=list)

    def add(self, check_id, inputs, status, witness=None, wall_time=0.0):
        self.records.append(
            CheckRecord(check_id, inputs, status, witness or {}, wall_time)
        )

    def counts(self):
        out = {"pass": 0, "fail": 0, "observation": 0}
        for r in self.records:
            out[r.status] = out.get(r.status, 0) + 1
        return out

    def failed(self) -> bool:
        return any(r.status == "fail" for r in self.records)

    def as_dict(self, timings: bool) -> dict:
        records = []
        for r in self.records:
            rec = {
                "check": r.check_id,
                "inputs": r.inputs,
                "status": r.status,
                "witness": r.witness,
            }
            if timings:
                rec["wall_time_s"] = round(r.wall_time, 3)
            records.append(rec)
        return {
            "tool_version": __version__,
            "config": self.config,
            "records": records,
            "summary": self.counts(),
        }

    def to_json(self, timings: bool) -> str:
        return json.dumps(self.as_dict(timings), indent=2) + "\n"

    def to_csv(self, timings: bool) -> str:
        buf = io.StringIO()
        cols = ["check", "inputs", "status", "witness"]
        if timings:
            cols.append("wall_time_s")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in self.records:
            row = [
                r.check_id,
                json.dumps(r.inputs, sort_keys=True),
                r.status,
                json.dumps(r.witness, sort_keys=True),
            ]
            if timings:
                row.append(f"{r.wall_time:.3f}")
            w.writerow(row)
        return buf.getvalue()

    def to_text(self) -> str:
        lines = []
        for r in self.records:
            ins = " ".join(f"{k}={v}" for k, v in r.inputs.items())
            extra = ""
            if r.witness:
                extra = "  " + " ".join(f"{k}={v}" for k, v in r.witness.items())
            lines.append(f"{r.status.upper():12} {r.check_id:24} {ins}{extra}")
        c = self.counts()
        lines.append(
            f"summary: {c['pass']} pass, {c['fail']} fail, {c['observation']} observations"
        )
        return "\n".join(lines) + "\n"


def _emit(text: str, path: str | None):
    if path:
        try:
            with open(path, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise SystemExit(f"ec: cannot write {path}: {exc}")
    else:
        sys.stdout.write(text)


def _report_exit(report: VerificationReport, args) -> int:
    if args.format == "json":
        _emit(report.to_json(args.timings), args.output)
    elif args.format == "csv":
        _emit(report.to_csv(args.timings), args.output)
    else:
        _emit(report.to_text(), args.output)
    return 1 if report.failed() else 0


def _progress_printer(label: str):
    def cb(done, total):
        print(f"{label}: {done}/{total}", file=sys.stderr, flush=True)

    return cb


def _guard_n(n: int, force: bool, parser):
    if n > N_GUARD and not force:
        parser.error(
            f"n={n} exceeds the practical ceiling {N_GUARD} "
            "(set-partition count and term counts grow super-exponentially); "
            "pass --force to override"
        )


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_compute(args, parser) -> int:
    _guard_n(args.n, args.force, parser)
    progress = _progress_printer(f"EC_{args.n} partitions") if args.n >= 6 else None
    pol = ec_poly(args.n, jobs=args.jobs, progress=progress)
    if args.basis == "raw":
        _emit(pol.poly.canonical() + "\n", args.output)
        return 0
    basis = _BASIS_ALIASES[args.basis]
    exp = expand(pol.poly, basis)
    _emit(_expansion_text(args.n, exp), args.output)
    return 0


def _expansion_text(n: int, exp) -> str:
    verdict = sign_coherency(exp)
    lines = [f"EC_{n} expanded in basis {exp.basis} ({len(exp.coeffs)} partitions)"]
    for lam in exp.ordered_partitions():
        c = exp.coeffs[lam]
        lam_s = "(" + ",".join(map(str, lam)) + ")"
        lines.append(f"  {lam_s:16} {c.sign_class():7} {c.canonical()}")
    pm = verdict.parity_map
    lines.append(
        f"verdict: {'coherent' if verdict.coherent else 'VIOLATED'}"
        f"; parity map: even -> {pm.get('even')}, odd -> {pm.get('odd')}"
    )
    if verdict.violation:
        lines.append(f"violation at {verdict.violation[0]}: {verdict.violation[1]}")
    return "\n".join(lines) + "\n"


def _expansion_json(n: int, exp) -> dict:
    verdict = sign_coherency(exp)
    entries = []
    for lam in exp.ordered_partitions():
        c = exp.coeffs[lam]
        entries.append(
            {
                "partition": list(lam),
                "coeff": c.canonical(),
                "sign": c.sign_class(),
            }
        )
    return {
        "n": n,
        "basis": exp.basis,
        "entries": entries,
        "verdict": {
            "coherent": verdict.coherent,
            "parity_map": {
                "even": verdict.parity_map.get("even"),
                "odd": verdict.parity_map.get("odd"),
            },
        },
    }


def cmd_expand(args, parser) -> int:
    _guard_n(args.n, args.force, parser)
    basis = _BASIS_ALIASES[args.basis]
    pol = ec_poly(args.n, jobs=args.jobs)
    exp = expand(pol.poly, basis)
    verdict = sign_coherency(exp)
    if args.format == "json":
        _emit(json.dumps(_expansion_json(args.n, exp), indent=2) + "\n", args.output)
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["partition", "coeff", "sign"])
        for lam in exp.ordered_partitions():
            c = exp.coeffs[lam]
            w.writerow([" ".join(map(str, lam)), c.canonical(), c.sign_class()])
        _emit(buf.getvalue(), args.output)
    else:
        _emit(_expansion_text(args.n, exp), args.output)
    return 0 if verdict.coherent else 1


def cmd_verify_symmetry(args, parser) -> int:
    _guard_n(args.max_n, args.force, parser)
    report = VerificationReport(config=_config_echo(args, max_n=args.max_n))
    for n in range(1, args.max_n + 1):
        progress = _progress_printer(f"EC_{n} partitions") if n >= 6 else None
        t0 = time.perf_counter()
        pol = ec_poly(n, jobs=args.jobs, progress=progress)
        verdict = check_symmetry(pol)
        integral = pol.poly.is_integral()
        wall = time.perf_counter() - t0
        status = "pass" if verdict.symmetric and integral else "fail"
        witness = {}
        if not verdict.symmetric:
            witness["transposition"] = verdict.counterexample
        witness["integral_coefficients"] = integral
        report.add("symmetry", {"n": n}, status, witness, wall)
    return _report_exit(report, args)


def cmd_cluster_xvar(args, parser) -> int:
    if args.route == "closed":
        if args.n < 3 or args.c < 2:
            parser.error("closed form needs --n >= 3 and --c >= 2")
        pol = xvar_closed_form(args.n, args.c)
    else:
        b = args.b if args.b is not None else args.c
        pol = xvar_recurrence(args.n, ClusterParams(b, args.c))
    _emit(pol.canonical() + "\n", args.output)
    return 0


_CHI_ROUTES = ("recurrence", "closed", "small-e1", "expanded", "bridge")


def _chi_one(route: str, n: int, c: int, e1: int, e2: int):
    if route == "recurrence":
        return chi_from_recurrence(n, c).get(e1, e2)
    if route == "closed":
        return chi_closed_form(n, c, e1, e2)
    if route == "small-e1":
        return chi_small_e1(n, c, e1, e2)
    if route == "expanded":
        return chi_expanded(n, c, e1, e2)
    if route == "bridge":
        return ec_bridge(n, c, e1, e2)
    raise ValueError(route)


def _chi_grid_text(table) -> str:
    """Aligned grid, rows indexed by e2, columns by e1."""
    if not table.entries:
        return "(empty table)\n"
    max_e1 = max(e1 for e1, _ in table.entries)
    max_e2 = max(e2 for _, e2 in table.entries)
    cells = [[str(table.get(e1, e2)) for e1 in range(max_e1 + 1)] for e2 in range(max_e2 + 1)]
    width = max(2, max(len(s) for row in cells for s in row))
    head = "e2\\e1 " + " ".join(f"{e1:>{width}}" for e1 in range(max_e1 + 1))
    lines = [head]
    for e2, row in enumerate(cells):
        lines.append(f"{e2:>5} " + " ".join(f"{s:>{width}}" for s in row))
    return "\n".join(lines) + "\n"


def cmd_cluster_chi(args, parser) -> int:
    n, c = args.n, args.c
    if n < 3 or c < 2:
        parser.error("chi tables need --n >= 3 and --c >= 2")
    if args.e1 is not None and args.e2 is not None:
        routes = _CHI_ROUTES if args.route == "all" else (args.route,)
        values = {}
        for route in routes:
            if route in ("small-e1", "expanded", "bridge") and (args.e1 >= c or n < 4):
                continue
            values[route] = _chi_one(route, n, c, args.e1, args.e2)
        agree = len(set(values.values())) <= 1
        if args.format == "json":
            out = {
                "c": c,
                "n": n,
                "e1": args.e1,
                "e2": args.e2,
                "routes": values,
                "agree": agree,
            }
            _emit(json.dumps(out, indent=2) + "\n", args.output)
        else:
            lines = [f"chi(e1={args.e1}, e2={args.e2}) for n={n}, c={c}:"]
            for route, v in values.items():
                lines.append(f"  {route:12} {v}")
            lines.append(f"agree: {agree}")
            _emit("\n".join(lines) + "\n", args.output)
        return 0 if agree else 1
    route = "recurrence" if args.route == "all" else args.route
    if route not in ("recurrence", "closed"):
        parser.error(f"route {route} needs explicit --e1/--e2")
    table = (
        chi_from_recurrence(n, c)
        if route == "recurrence"
        else chi_table_closed_form_cached(n, c)
    )
    if args.format == "json":
        out = {
            "c": c,
            "n": n,
            "dim_vector": list(table.dim_vector()),
            "entries": [
                {"e1": e1, "e2": e2, "chi": v}
                for (e1, e2), v in sorted(table.entries.items(), key=lambda kv: (kv[0][1], kv[0][0]))
            ],
        }
        _emit(json.dumps(out, indent=2) + "\n", args.output)
    else:
        _emit(_chi_grid_text(table), args.output)
    return 0


def chi_table_closed_form_cached(n, c):
    from .cluster import chi_table_closed_form

    return chi_table_closed_form(n, c)


def cmd_cluster_cross_check(args, parser) -> int:
    cs = [int(x) for x in args.c.split(",") if x]
    if not cs or any(c < 2 for c in cs):
        parser.error("--c takes a comma-separated list of integers >= 2")
    reports = []
    any_disagree = False
    for c in cs:
        for n in range(3, args.max_n + 1):
            rep = cross_check(n, c, bridge_cap=args.bridge_cap)
            reports.append(rep)
            any_disagree = any_disagree or not rep.agree
    if args.format == "json":
        payload = [
            {
                "c": rep.c,
                "n": rep.n,
                "dim_vector": list(rep.dim_vector),
                "cells": [
                    {
                        "e1": cell.e1,
                        "e2": cell.e2,
                        "routes": {k: _route_value(v) for k, v in cell.routes.items()},
                        "agree": cell.agree,
                    }
                    for cell in rep.cells
                ],
            }
            for rep in reports
        ]
        _emit(json.dumps(payload, indent=2) + "\n", args.output)
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["c", "n", "e1", "e2", "routes", "agree"])
        for rep in reports:
            for cell in rep.cells:
                w.writerow(
                    [
                        rep.c,
                        rep.n,
                        cell.e1,
                        cell.e2,
                        json.dumps({k: _route_value(v) for k, v in cell.routes.items()}, sort_keys=True),
                        cell.agree,
                    ]
                )
        _emit(buf.getvalue(), args.output)
    else:
        lines = []
        for rep in reports:
            bad = [cell for cell in rep.cells if not cell.agree]
            lines.append(
                f"c={rep.c} n={rep.n} dim={rep.dim_vector}: "
                f"{'ALL ROUTES AGREE' if rep.agree else f'{len(bad)} DISAGREEMENTS'} "
                f"({len(rep.cells)} nonzero cells, {rep.box_cells_checked} checked)"
            )
            for cell in bad:
                lines.append(f"  e1={cell.e1} e2={cell.e2}: {cell.routes}")
        _emit("\n".join(lines) + "\n", args.output)
    return 1 if any_disagree else 0


def _route_value(v):
    return v if isinstance(v, int) else str(v)


def cmd_cluster_identities(args, parser) -> int:
    rng = random.Random(args.seed)
    report = VerificationReport(
        config=_config_echo(
            args, eq12_count=args.eq12_count, stfact_count=args.stfact_count
        )
    )
    for _ in range(args.eq12_count):
        M = rng.randint(0, 8)
        N = rng.randint(-5, 5)
        c = rng.randint(2, 4)
        e1 = rng.randint(0, c - 1)
        e2 = rng.randint(0, 4)
        t0 = time.perf_counter()
        verdict = binomial_identity_check(M, N, c, e1, e2)
        report.add(
            "binomial-identity",
            {"M": M, "N": N, "c": c, "e1": e1, "e2": e2},
            "pass" if verdict.equal else "fail",
            {} if verdict.equal else {"lhs": verdict.lhs, "rhs": verdict.rhs},
            time.perf_counter() - t0,
        )
    for _ in range(args.stfact_count):
        A = 0
        while A == 0:
            A = rng.randint(-4, 4)
        B = rng.randint(-5, 5)
        order = rng.randint(1, 4)
        t0 = time.perf_counter()
        verdict = stfact_check(A, B, order, args.trunc)
        report.add(
            "series-derivative-identity",
            {"A": A, "B": B, "order": order, "trunc": args.trunc},
            "pass" if verdict.equal else "fail",
            {} if verdict.equal else {"mismatches": list(verdict.mismatches[:3])},
            time.perf_counter() - t0,
        )
    return _report_exit(report, args)


def _config_echo(args, **extra) -> dict:
    out = {
        "command": args.command if args.command != "cluster" else f"cluster {args.cluster_command}",
        "format": args.format,
        "jobs": args.jobs,
        "seed": args.seed,
    }
    out.update(extra)
    return out


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _apply_config_file(argv: list) -> list:
    """Expand ``--config FILE`` into defaults placed right after the
    subcommand name (command line wins: argparse keeps the last
    occurrence of a flag)."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise SystemExit("ec: --config needs a path")
    path = argv[i + 1]
    rest = argv[:i] + argv[i + 2 :]
    pre = []
    try:
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise SystemExit(f"ec: malformed config line {line!r}")
                key, val = (x.strip() for x in line.split("=", 1))
                flag = "--" + key.replace("_", "-")
                if val.lower() in ("true", "false"):
                    if val.lower() == "true":
                        pre.append(flag)
                else:
                    pre.extend([flag, val])
    except OSError as exc:
        raise SystemExit(f"ec: cannot read config {path}: {exc}")
    # insert after the command tokens ("cluster" carries a nested one)
    head = 1 if rest and not rest[0].startswith("-") else 0
    if head == 1 and rest[0] == "cluster" and len(rest) > 1:
        head = 2
    return rest[:head] + pre + rest[head:]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ec",
        description="Exact EC-polynomial, symmetric-function, and rank-2 cluster computations.",
    )
    parser.add_argument("--version", action="version", version=f"ec {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--output", metavar="PATH", default=None)
    common.add_argument(
        "--jobs",
        type=int,
        default=int(os.environ.get("EC_JOBS", "1")),
        help="worker processes for the set-partition sum (default: EC_JOBS or 1)",
    )
    common.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps")
    common.add_argument("--force", action="store_true", help="allow n beyond the practical ceiling")
    common.add_argument("--timings", action="store_true", help="include wall times in json/csv output")
    common.add_argument("--config", metavar="PATH", help="key=value file of default flags")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", parents=[common], help="print EC_n in canonical text form")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--basis", default="raw", choices=("raw",) + tuple(_BASIS_ALIASES))
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify-symmetry", parents=[common], help="adjacent-transposition symmetry suite")
    p.add_argument("--max-n", type=int, default=5)
    p.set_defaults(func=cmd_verify_symmetry)

    p = sub.add_parser("expand", parents=[common], help="basis expansion with sign verdict")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--basis", required=True, choices=tuple(_BASIS_ALIASES))
    p.set_defaults(func=cmd_expand)

    pc = sub.add_parser("cluster", help="cluster-variable and chi computations")
    csub = pc.add_subparsers(dest="cluster_command", required=True)

    p = csub.add_parser("xvar", parents=[common], help="one cluster variable")
    p.add_argument("--n", type=int, required=True, help="index m of the cluster variable")
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--b", type=int, default=None, help="b for the recurrence route (default: c)")
    p.add_argument("--route", choices=("recurrence", "closed"), default="recurrence")
    p.set_defaults(func=cmd_cluster_xvar, command="cluster")

    p = csub.add_parser("chi", parents=[common], help="Euler characteristics")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--e1", type=int, default=None)
    p.add_argument("--e2", type=int, default=None)
    p.add_argument("--route", choices=("all",) + _CHI_ROUTES, default="all")
    p.set_defaults(func=cmd_cluster_chi, command="cluster")

    p = csub.add_parser("cross-check", parents=[common], help="route-agreement harness")
    p.add_argument("--max-n", type=int, default=6)
    p.add_argument("--c", default="2,3", help="comma-separated list of c values")
    p.add_argument("--bridge-cap", type=int, default=5, help="largest e2 for the EC bridge route")
    p.set_defaults(func=cmd_cluster_cross_check, command="cluster")

    p = csub.add_parser("identities", parents=[common], help="randomized identity sweeps")
    p.add_argument("--eq12-count", type=int, default=500)
    p.add_argument("--stfact-count", type=int, default=200)
    p.add_argument("--trunc", type=int, default=12)
    p.set_defaults(func=cmd_cluster_identities, command="cluster")

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    argv = _apply_config_file(argv)
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except ECAlgError as exc:
        print(f"ec: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
