"""Command-line interface.

Subcommands:
  run <config>      execute an experiment config (or shipped preset name)
  diagnose          run the property-check suite
  summarize <dir>   aggregate metrics CSVs into a summary table

Exit codes: 0 success, 2 configuration/validation error, 3 divergence,
4 diagnostics failure.
"""

import argparse
import os
import sys

from . import csvio, diagnostics, experiments
from .config import PRESET_NAMES
from .errors import (ConfigError, CsvFormatError, DiagnosticsError,
                     DivergedError, TopologyError)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGED = 3
EXIT_DIAGNOSTICS = 4


def build_parser():
    parser = argparse.ArgumentParser(
        prog="netzo",
        description="Decentralized zeroth-order optimization experiments "
                    "with a componentwise powerball gain.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run an experiment config or preset "
                                       f"({', '.join(PRESET_NAMES)})")
    run_p.add_argument("config", help="config file path or preset name")
    run_p.add_argument("--seed", type=int, default=None,
                       help="run a single replicate seed instead of the configured list")
    run_p.add_argument("--gamma", type=float, default=None,
                       help="run a single gain exponent instead of the configured list")
    run_p.add_argument("--out", default=None, help="output directory")
    run_p.add_argument("--quiet", action="store_true", help="suppress progress lines")

    diag_p = sub.add_parser("diagnose", help="run the diagnostics suite")
    diag_p.add_argument("--out", default=None,
                        help="also write the pass/fail table to this directory")
    diag_p.add_argument("--quiet", action="store_true")

    sum_p = sub.add_parser("summarize", help="summarize metrics CSVs from a directory")
    sum_p.add_argument("directory", help="directory containing metrics_*.csv files")
    sum_p.add_argument("--out", default=None, help="write summary CSV here instead of stdout")
    sum_p.add_argument("--quiet", action="store_true")
    return parser


def _cmd_run(args):
    spec = experiments.load_experiment(args.config, seed=args.seed, gamma=args.gamma,
                                       out=args.out, quiet=args.quiet)
    written = experiments.run_experiment(spec)
    if not args.quiet:
        for path in written:
            print(path)
    return EXIT_OK


def _cmd_diagnose(args):
    results = diagnostics.run_all(quiet=args.quiet)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        csvio.write_table_csv(
            os.path.join(args.out, "diagnostics.csv"),
            ("check", "passed", "detail"),
            [[r.name, "pass" if r.passed else "FAIL", r.detail] for r in results],
            meta={"schema": csvio.SUMMARY_SCHEMA, "experiment": "diagnostics"},
        )
    failed = [r for r in results if not r.passed]
    if not args.quiet:
        print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_DIAGNOSTICS if failed else EXIT_OK


def _cmd_summarize(args):
    summary, comparison = experiments.summarize(args.directory)
    if args.out:
        csvio.write_table_csv(args.out, experiments.SUMMARY_COLUMNS, summary,
                              meta={"schema": csvio.SUMMARY_SCHEMA})
    if not args.quiet:
        print(",".join(experiments.SUMMARY_COLUMNS))
        for row in summary:
            print(",".join(str(v) for v in row))
        if comparison:
            print()
            print(",".join(experiments.COMPARISON_COLUMNS))
            for row in comparison:
                print(",".join(str(v) for v in row))
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "diagnose":
            return _cmd_diagnose(args)
        return _cmd_summarize(args)
    except (ConfigError, TopologyError, CsvFormatError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except DivergedError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DIVERGED
    except DiagnosticsError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DIAGNOSTICS


if __name__ == "__main__":
    sys.exit(main())
