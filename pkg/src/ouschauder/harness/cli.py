"""Command line entry point.

Subcommands
-----------
verify              run every suite
suite NAME          run one suite
solve               evaluate a semigroup, resolvent or mild solution jet
constants           print k_p, c0, c1 and the Holder-estimate constants

Exit codes: 0 all inequalities hold, 1 at least one failed, 2 configuration
or numerical error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from ..errors import ConfigError, OUError
from ..fields import constant_in_time
from ..semigroup import semigroup_jet
from ..solver import mild_jet, resolvent_jet
from .config import SuiteConfig, demo_config, load_config
from .constants import constants_table
from .report import _clean, all_passed, emit_report, summary_lines
from .suites import SUITE_ORDER, SuiteContext, run_suites

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="INI configuration file (default: built-in demo config)")
    p.add_argument("--out", help="output directory (overrides [output] directory)")
    p.add_argument("--seed", type=int, help="seed for designs and quasi-Monte Carlo (overrides [suite] seed)")
    p.add_argument("--format", choices=("json", "csv", "both"), help="report format (overrides [output] format)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ouschauder", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("verify", help="run all suites")
    _common(p)
    p = sub.add_parser("suite", help="run one suite")
    p.add_argument("name", choices=SUITE_ORDER)
    _common(p)
    p = sub.add_parser("solve", help="evaluate one operator at one point")
    _common(p)
    p.add_argument("--operator", choices=("semigroup", "resolvent", "mild"), default="resolvent")
    p.add_argument("--field", required=True, help="corpus entry (name or index) used as data")
    p.add_argument("--source", help="corpus entry used as time-constant source (mild only)")
    p.add_argument("--x", required=True, help="comma-separated ambient point")
    p.add_argument("--t", type=float, default=1.0, help="time (semigroup, mild)")
    p.add_argument("--lam", type=float, default=1.0, help="resolvent parameter")
    p.add_argument("--order", type=int, default=1, choices=(0, 1, 2, 3))
    p = sub.add_parser("constants", help="print the constants table")
    _common(p)
    return parser


def _load(args) -> SuiteConfig:
    cfg = load_config(args.config) if args.config else demo_config()
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    if args.out:
        cfg.out_dir = args.out
    if args.format:
        cfg.out_format = args.format
    return cfg


def _entry(ctx: SuiteContext, key: str):
    for e in ctx.corpus:
        if e.name == key or str(e.index) == key:
            return e
    raise ConfigError(f"no corpus entry named or numbered {key!r}")


def _run(cfg: SuiteConfig, names, stem: str) -> int:
    reports = run_suites(cfg, names)
    paths = emit_report(reports, cfg.out_dir, cfg.out_format, cfg.curves, stem)
    for line in summary_lines(reports):
        print(line)
    for p in paths:
        print(f"wrote {p}")
    ok = all_passed(reports)
    print("ALL PASS" if ok else "FAILURES PRESENT")
    return EXIT_OK if ok else EXIT_FAIL


def _solve(cfg: SuiteConfig, args) -> int:
    ctx = SuiteContext(cfg)
    f = _entry(ctx, args.field).field
    try:
        x = np.array([float(v) for v in args.x.split(",")])
    except ValueError:
        raise ConfigError(f"--x must be comma-separated numbers, got {args.x!r}") from None
    if x.shape != (ctx.model.dimension,):
        raise ConfigError(f"--x needs {ctx.model.dimension} coordinates")
    if args.operator == "semigroup":
        jet = semigroup_jet(ctx.model, f, args.t, x[None], args.order, cfg.quadrature)
    elif args.operator == "resolvent":
        jet = resolvent_jet(ctx.model, f, args.lam, x[None], args.order, cfg.time_quadrature, cfg.quadrature)
    else:
        g = constant_in_time(_entry(ctx, args.source).field) if args.source else None
        jet = mild_jet(ctx.model, f, g, args.t, x[None], min(args.order, 2), cfg.time_quadrature, cfg.quadrature)
    levels = {name: jet.level(k)[0].tolist() for k, name in enumerate(("value", "grad", "hess", "d3"))
              if jet.level(k) is not None}
    out = {"operator": args.operator, "field": f.name, "x": x.tolist(), "t": args.t, "lambda": args.lam,
           "levels": levels, "err_est": jet.err[0].tolist(), "engine": jet.engine}
    _write_single(out, cfg.out_format)
    return EXIT_OK


def _write_single(obj: dict, fmt: str) -> None:
    obj = _clean(obj)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        flat = {k: json.dumps(v) if isinstance(v, (dict, list)) else v for k, v in obj.items()}
        w.writerow(list(flat))
        w.writerow(list(flat.values()))
        sys.stdout.write(buf.getvalue())
    else:
        sys.stdout.write(json.dumps(obj, indent=1) + "\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _load(args)
        if args.command == "verify":
            return _run(cfg, None, "report")
        if args.command == "suite":
            return _run(cfg, [args.name], f"report_{args.name}")
        if args.command == "solve":
            return _solve(cfg, args)
        _write_single(constants_table(cfg.alphas, cfg.lambdas), "json" if cfg.out_format != "csv" else "csv")
        return EXIT_OK
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (OUError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
