"""``verify`` command line entry point.

Every flag can also be set through an environment variable named
``NORMUNITS_<FLAG>`` (dashes become underscores); command-line flags win.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from .errors import AnomalyError, NormUnitsError
from .report import FORMATS, SUITES, RunConfig, emit_report, format_report, load_entries, run

ENV_PREFIX = "NORMUNITS_"

EXIT_OK, EXIT_CHECK_FAILED, EXIT_IO, EXIT_ANOMALY = 0, 1, 2, 3


def _suites(text: str) -> tuple[str, ...]:
    parts = tuple(p.strip() for p in text.split(",") if p.strip())
    bad = [p for p in parts if p not in SUITES]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown suite(s): {', '.join(bad)}")
    return parts


def _env(name: str, default=None):
    return os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"), default)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="verify", description=__doc__.splitlines()[0])
    p.add_argument("--suites", type=_suites, default=_suites(_env("suites", ",".join(SUITES))),
                   help="comma-separated subset of " + ",".join(SUITES) + " (empty string for none)")
    p.add_argument("--max-exhaustive-order", type=int, choices=(8, 16, 32),
                   default=int(_env("max-exhaustive-order", 16)),
                   help="largest order walked exhaustively; 32 enables heavy mode")
    p.add_argument("--samples", type=int, default=int(_env("samples", 10_000)))
    p.add_argument("--seed", type=int, default=int(_env("seed", 0)))
    p.add_argument("--threads", type=int, default=int(_env("threads", 1)))
    env_cat = _env("catalog")
    p.add_argument("--catalog", action="append", default=None,
                   help="extra catalog file (Cayley table or presentation); repeatable")
    p.add_argument("--out", default=_env("out", "-"), help="report path, '-' for stdout")
    p.add_argument("--format", choices=FORMATS, default=_env("format", "tsv"))
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(env_catalog=tuple(env_cat.split(os.pathsep)) if env_cat else ())
    return p


def config_from_args(argv: list[str] | None = None) -> RunConfig:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    return RunConfig(
        suites=args.suites,
        max_exhaustive_order=args.max_exhaustive_order,
        sample_count=args.samples,
        seed=args.seed,
        threads=args.threads,
        catalog_paths=tuple(args.catalog) if args.catalog is not None else args.env_catalog,
        output_path=args.out,
        format=args.format,
    )


def main(argv: list[str] | None = None) -> int:
    try:
        config = config_from_args(argv)
    except ValueError as err:
        print(f"verify: {err}", file=sys.stderr)
        return EXIT_IO
    try:
        entries = load_entries(config)
    except (OSError, NormUnitsError) as err:
        where = getattr(err, "path", None) or getattr(err, "filename", None)
        print(f"verify: cannot load catalog {where}: {err}", file=sys.stderr)
        return EXIT_IO
    try:
        report = run(config, entries)
    except AnomalyError as err:
        print(f"verify: ANOMALY {err}", file=sys.stderr)
        return EXIT_ANOMALY
    try:
        emit_report(report)
    except OSError as err:
        print(f"verify: cannot write report: {err}", file=sys.stderr)
        return EXIT_IO
    code = report.exit_code()
    for _, c in report.checks:
        if c.status in ("fail", "anomaly"):
            print(f"verify: {c.status.upper()} {c.name}: {c.detail}", file=sys.stderr)
    return code


__all__ = ["main", "build_parser", "config_from_args", "format_report"]
