"""Command-line front end.

Subcommands map one-to-one onto the verification suites, plus ``bound``
for ad-hoc evaluation of a deterministic bound.  Reports are written as
CSV with a fixed column set; floating-point fields carry 17 significant
digits so the files double as cross-platform golden files.

Exit codes: 0 all rows pass, 1 usage or configuration error, 2 numerical
or I/O failure, 3 at least one bound violated beyond three standard
errors.
"""

from __future__ import annotations

import argparse
import csv
import sys

from .bounds import (
    evt_limits,
    exponential_lower_tail_bound,
    gaussian_max_bernstein,
    gaussian_max_shifted_tail,
    gaussian_max_vn,
    gaussian_median_bernstein,
    gaussian_order_variance_bound,
    gaussian_signed_max_variance_bound,
)
from .config import apply_overrides, load_config
from .errors import (
    ConfigError,
    DomainError,
    InputError,
    NumericalError,
    OrdstatError,
    RangeError,
)
from .harness import BoundReport, run_suite
from .rng import kernel_backend

__all__ = ["main", "parse_and_dispatch", "write_report", "CSV_HEADER"]

CSV_HEADER = ("suite", "family", "n", "k", "param",
              "empirical", "stderr", "bound", "margin", "pass")

_COMMAND_SUITE = {
    "verify-variance": "variance",
    "verify-tails": "tails",
    "evt-limits": "evt",
    "gaussian-suite": "gaussian",
    "association": "association",
    "entropy": "entropy",
}

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_VIOLATION = 3


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_report(report: BoundReport, out_path: str) -> None:
    """Write the report as UTF-8 CSV with LF newlines and a fixed schema."""
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in report.rows:
            writer.writerow([
                r.suite, r.family, str(r.n), str(r.k), r.param,
                _fmt(r.empirical), _fmt(r.stderr), _fmt(r.bound),
                _fmt(r.margin), "true" if r.passed else "false",
            ])


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ordstat",
        description="Verify variance and tail bounds for order statistics "
                    "against exact Monte Carlo sampling.")
    parser.add_argument("--version", action="store_true",
                        help="print version and kernel backend, then exit")
    sub = parser.add_subparsers(dest="command")
    for command in _COMMAND_SUITE:
        p = sub.add_parser(command, help=f"run the {_COMMAND_SUITE[command]} suite")
        p.add_argument("--config", required=True, help="experiment config file")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config key (repeatable)")
        p.add_argument("--seed", type=int, default=None, help="master seed override")
        p.add_argument("--out", default=None, help="report path override")
    b = sub.add_parser("bound", help="evaluate one deterministic bound")
    b.add_argument("--kind", required=True, choices=[
        "GAUSS_ORDER_VAR", "EXP_LOWER_TAIL", "GAUSS_MAX_BERNSTEIN",
        "GAUSS_MEDIAN_BERNSTEIN", "GAUSS_MAX_SHIFTED", "GAUSS_SIGNED_MAX_VAR",
        "EVT_LIMIT", "ES_VARIANCE", "HAZARD_VARIANCE", "EXP_ES_LOGMGF"])
    b.add_argument("--n", type=int, default=None)
    b.add_argument("--k", type=int, default=None)
    b.add_argument("--t", type=float, default=None)
    b.add_argument("--z", type=float, default=None)
    b.add_argument("--gamma", type=float, default=None)
    return parser


def _need(args, names):
    for name in names:
        if getattr(args, name) is None:
            raise ConfigError(f"bound kind requires --{name}")


def _run_bound(args) -> int:
    kind = args.kind
    if kind in ("ES_VARIANCE", "HAZARD_VARIANCE", "EXP_ES_LOGMGF"):
        raise ConfigError(
            f"{kind} is driven by Monte Carlo moments; run the matching suite instead")
    if kind == "GAUSS_ORDER_VAR":
        _need(args, ("n", "k"))
        print(_fmt(gaussian_order_variance_bound(args.n, args.k).value))
    elif kind == "EXP_LOWER_TAIL":
        _need(args, ("n", "k", "z"))
        print(_fmt(exponential_lower_tail_bound(args.n, args.k, args.z)))
    elif kind == "GAUSS_MAX_BERNSTEIN":
        _need(args, ("n", "t"))
        params = gaussian_max_vn(args.n)
        value = gaussian_max_bernstein(params, args.t, require_applicable=False)
        if not params.applicable:
            print(f"note: v_n = {params.v_n:g} >= 1 at n = {args.n}; "
                  "threshold is informational only", file=sys.stderr)
        print(_fmt(value.value))
    elif kind == "GAUSS_MEDIAN_BERNSTEIN":
        _need(args, ("n", "t"))
        print(_fmt(gaussian_median_bernstein(args.n, args.t).value))
    elif kind == "GAUSS_MAX_SHIFTED":
        _need(args, ("n", "t"))
        print(_fmt(gaussian_max_shifted_tail(args.n, args.t).value))
    elif kind == "GAUSS_SIGNED_MAX_VAR":
        _need(args, ("n",))
        print(_fmt(gaussian_signed_max_variance_bound(args.n).value))
    elif kind == "EVT_LIMIT":
        _need(args, ("gamma",))
        lim = evt_limits(args.gamma)
        print(" ".join(_fmt(v) for v in
                       (lim.spacing_limit, lim.variance_limit, lim.ratio)))
    return EXIT_OK


def parse_and_dispatch(argv) -> int:
    """Parse argv, run the requested command, return the exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse signals usage problems with its own exit; --help exits 0
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    if args.version:
        from . import __version__
        print(f"ordstat {__version__} (kernel: {kernel_backend()})")
        return EXIT_OK
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "bound":
            return _run_bound(args)
        return _run_suite_command(args)
    except (ConfigError, InputError, DomainError) as exc:
        # the request itself is invalid
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, RangeError, OSError, OrdstatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def _run_suite_command(args) -> int:
    suite = _COMMAND_SUITE[args.command]
    configs = [cfg for cfg in load_config(args.config) if cfg.suite == suite]
    if not configs:
        raise ConfigError(f"config {args.config} defines no {suite!r} experiment")
    out_path = None
    merged = BoundReport()
    for cfg in configs:
        cfg = apply_overrides(cfg, args.set)
        if args.seed is not None:
            cfg = apply_overrides(cfg, [f"seed={args.seed}"])
        if args.out is not None:
            cfg = apply_overrides(cfg, [f"out={args.out}"])
        cfg.validate()
        if cfg.out_path is None:
            raise ConfigError("no report path: set 'out' in the config or pass --out")
        if out_path is not None and cfg.out_path != out_path:
            raise ConfigError("all experiments of one invocation share one report path")
        out_path = cfg.out_path
        result = run_suite(cfg)
        merged.rows.extend(result.rows)
    write_report(merged, out_path)
    failures = merged.counted_failures()
    if failures:
        for row in failures:
            print(f"violation: {row.suite} {row.family} n={row.n} k={row.k} "
                  f"{row.param}: empirical {row.empirical:.6g} > bound "
                  f"{row.bound:.6g} + 3*{row.stderr:.6g}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def main() -> None:
    sys.exit(parse_and_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
