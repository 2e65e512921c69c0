"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 computation failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import SloshError
from .figures import FIGURES, domain_figure, figure_data, render_svg
from .geometry import CaseTag, build_domain, case_mode, find_high_spots, smooth_variant
from .kernel import Family, Potential, QuadratureConfig, make_mode
from .output import csv_text, write_case, write_text
from .verify.report import UNCHECKED_CLAIM
from .verify import feature_report, format_features, format_table, reference_report, report_to_json

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_COMPUTE = 0, 1, 2, 3
DEFAULT_OUT = "sloshspot_out"
FORMATS = ("json", "csv", "svg")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    cases: tuple[str, ...]
    out_dir: Path
    quad: QuadratureConfig
    formats: tuple[str, ...]
    jobs: int = 1
    smooth_c: float | None = None


def _out_dir(arg: str | None) -> Path:
    return Path(arg or os.environ.get("SLOSHSPOT_OUT") or DEFAULT_OUT)


def _quad_config(args) -> QuadratureConfig:
    kw = {}
    if args.abs_tol is not None:
        kw["abs_tol"] = args.abs_tol
    if args.rel_tol is not None:
        kw["rel_tol"] = args.rel_tol
    try:
        return QuadratureConfig(**kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _formats(arg: str | None, default: Sequence[str]) -> tuple[str, ...]:
    if not arg:
        return tuple(default)
    fmts = tuple(f.strip().lower() for f in arg.split(",") if f.strip())
    bad = [f for f in fmts if f not in FORMATS]
    if bad:
        raise UsageError(f"unknown format(s) {bad}; choose from {FORMATS}")
    return fmts


# ---------------------------------------------------------------- eval

def cmd_eval(args) -> int:
    try:
        mode = make_mode(args.nu, Family.parse(args.family))
        pot = Potential(mode, _quad_config(args))
        f = pot.complex_derivative(args.x, args.y)
        g = pot.grad_v(args.x, args.y)
    except (SloshError, ValueError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for name, val in (("u", f.real), ("v", f.imag), ("v_x", g.dx), ("v_y", g.dy)):
        print(f"{name} = {val + 0.0:.12g}")
    return EXIT_OK


# ---------------------------------------------------------------- case

def _run_case(name: str, out_dir: str, quad: QuadratureConfig, formats: tuple[str, ...],
              smooth_c: float | None) -> list[str]:
    tag = CaseTag.parse(name)
    if smooth_c is not None:
        d = smooth_variant(case_mode(tag), smooth_c, quad)
        sub = f"{tag.value}_smooth_c{smooth_c:g}"
    else:
        d = build_domain(case_mode(tag), tag, quad)
        sub = tag.value
    spots = find_high_spots(d, quad)
    target = Path(out_dir) / sub
    written = write_case(target, d, spots, formats)
    if "svg" in formats:
        written.append(target / "domain.svg")
        write_text(written[-1], render_svg(domain_figure(d, quad)))
    return [str(p) for p in written]


def _parse_cases(names: Sequence[str]) -> tuple[str, ...]:
    if not names:
        raise UsageError("no case given")
    out = []
    for n in names:
        try:
            tag = CaseTag.parse(n)
        except ValueError:
            raise UsageError(f"unknown case {n!r}; choose from {[t.value for t in CaseTag]}") from None
        if tag is CaseTag.SMOOTH_VARIANT:
            raise UsageError("use a base case with --smooth-c for the smooth-bottom variant")
        out.append(tag.value)
    return tuple(out)


def cmd_case(args) -> int:
    try:
        rc = RunConfig(_parse_cases(args.case), _out_dir(args.out), _quad_config(args),
                       _formats(args.format, ("json", "csv")), max(1, args.jobs), args.smooth_c)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    jobs = [(c, str(rc.out_dir), rc.quad, rc.formats, rc.smooth_c) for c in rc.cases]
    try:
        if rc.jobs > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=rc.jobs) as ex:
                results = list(ex.map(_run_case, *zip(*jobs)))
        else:
            results = [_run_case(*j) for j in jobs]
    except SloshError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    for paths in results:
        for p in paths:
            print(p)
    return EXIT_OK


# ---------------------------------------------------------------- figure

def _run_figure(fig_id: str, out_dir: str, quad: QuadratureConfig) -> list[str]:
    data = figure_data(fig_id, quad)
    svg = Path(out_dir) / f"{fig_id}.svg"
    csv = Path(out_dir) / f"{fig_id}_trace.csv"
    write_text(svg, render_svg(data))
    write_text(csv, csv_text(("x", "u", "v"), data.trace))
    return [str(svg), str(csv)]


def cmd_figure(args) -> int:
    ids = list(FIGURES) if "all" in args.figure else args.figure
    bad = [f for f in ids if f not in FIGURES]
    if bad:
        print(f"error: unknown figure(s) {bad}; choose from {list(FIGURES)}", file=sys.stderr)
        return EXIT_USAGE
    try:
        quad = _quad_config(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = str(_out_dir(args.out))
    try:
        if args.jobs > 1 and len(ids) > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as ex:
                results = list(ex.map(_run_figure, ids, [out] * len(ids), [quad] * len(ids)))
        else:
            results = [_run_figure(f, out, quad) for f in ids]
    except SloshError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    for paths in results:
        for p in paths:
            print(p)
    return EXIT_OK


# ---------------------------------------------------------------- report

def cmd_report(args) -> int:
    cases = args.cases.split(",") if args.cases else None
    try:
        quad = _quad_config(args)
        rows = reference_report(cases, tolerance=args.tol, cfg=quad)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        features = feature_report(cases, quad)
    except SloshError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    ok = all(r.passed for r in rows) and all(f.holds for f in features)
    if args.format == "json":
        data = json.loads(report_to_json(rows))
        data["features_hold"] = {f.case: f.holds for f in features}
        data["not_checked"] = [UNCHECKED_CLAIM]
        data["pass"] = ok
        print(json.dumps(data, indent=2))
    else:
        print(format_table(rows), end="")
        print()
        print(format_features(features), end="")
        failing = [r.quantity for r in rows if not r.passed] + [f.case for f in features if not f.holds]
        if failing:
            print("failing: " + "; ".join(failing))
    return EXIT_OK if ok else EXIT_VERIFY


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--abs-tol", type=float, default=None, help="quadrature absolute tolerance")
    common.add_argument("--rel-tol", type=float, default=None, help="quadrature relative tolerance")
    common.add_argument("--out", default=None, help=f"output directory (env SLOSHSPOT_OUT, default {DEFAULT_OUT})")
    common.add_argument("--jobs", type=int, default=1, help="parallel worker processes")

    p = argparse.ArgumentParser(prog="sloshspot", description="Sloshing modes with interior high spots.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", parents=[common], help="evaluate u, v and grad v at a point")
    e.add_argument("--nu", type=float, required=True)
    e.add_argument("--family", choices=[f.value for f in Family], required=True)
    e.add_argument("--x", type=float, required=True)
    e.add_argument("--y", type=float, required=True)
    e.set_defaults(func=cmd_eval)

    c = sub.add_parser("case", parents=[common], help="build domains and write their data")
    c.add_argument("case", nargs="*", help="case tags, e.g. w32 w52 w72 w3 w2")
    c.add_argument("--case", dest="case_opt", action="append", default=[],
                   help="case tag (may be repeated; same as the positional form)")
    c.add_argument("--smooth-c", type=float, default=None, help="build the smooth-bottom variant v = -c")
    c.add_argument("--format", default=None, help="comma list of json,csv,svg (default json,csv)")
    c.set_defaults(func=cmd_case)

    f = sub.add_parser("figure", parents=[common], help="write figure SVG and trace CSV")
    f.add_argument("figure", nargs="+", help="fig1 ... fig5 or all")
    f.set_defaults(func=cmd_figure)

    r = sub.add_parser("report", parents=[common], help="compare computed and published values")
    r.add_argument("--cases", default=None, help="comma list of w32,w52,w72,w3,w2")
    r.add_argument("--tol", type=float, default=2e-5, help="absolute tolerance per row")
    r.add_argument("--format", choices=("text", "json"), default="text")
    r.set_defaults(func=cmd_report)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "case_opt"):
        args.case = list(args.case) + args.case_opt
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
