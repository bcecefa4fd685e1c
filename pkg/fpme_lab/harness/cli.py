import argparse
import logging
import sys
import time
from pathlib import Path
from typing import List, Optional

from fpme_lab import __version__
from fpme_lab.errors import FpmeError
from fpme_lab.harness.cache import ResultCache
from fpme_lab.harness.config import MODES, load_config
from fpme_lab.harness.report import REPORT_FORMATS, emit_report, write_timing
from fpme_lab.harness.suites import SUITES, run_hydro_study, run_pde_suite

__all__ = ["EXIT_PASSED", "EXIT_FAILED", "EXIT_ERROR", "build_parser", "main"]

logger = logging.getLogger(__name__)

EXIT_PASSED = 0
EXIT_FAILED = 1
EXIT_ERROR = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fpme-lab",
        description="Porous-medium exclusion process and fractional porous medium equation experiments",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config",
        help="INI file, by path or dotted name (default: the bundled configs.<mode>)",
    )
    common.add_argument("--gamma", type=float, help="jump exponent in (0, 2)")
    common.add_argument("--m", type=int, help="porous-medium exponent")
    common.add_argument(
        "--n", type=int, action="append", dest="n_list", help="scaling parameter, repeatable"
    )
    common.add_argument("--seed", type=int, dest="master_seed", help="master seed")
    common.add_argument("--out", type=Path, dest="output_dir", help="report directory")
    martingale = common.add_mutually_exclusive_group()
    martingale.add_argument(
        "--martingale", action="store_const", const=True, help="record Dynkin martingales (hydro)"
    )
    martingale.add_argument(
        "--no-martingale", action="store_const", const=False, dest="martingale", help="skip the martingales"
    )
    common.add_argument(
        "--format",
        choices=REPORT_FORMATS,
        action="append",
        dest="formats",
        help="report format, repeatable (default: json)",
    )
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("--no-cache", action="store_true", help="neither read nor write cached results")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="warnings only")

    commands = parser.add_subparsers(dest="mode", required=True, metavar="command")
    for mode in MODES:
        commands.add_parser(mode, parents=[common], help=f"run the {mode} suite")

    return parser


def _configure_logging(verbose: bool, quiet: bool) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one suite and write its report.

    Exit status: 0 if every check passed, 1 if a numeric check failed,
    2 on a configuration or runtime error.
    """
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose, args.quiet)

    overrides = {
        "gamma": args.gamma,
        "m": args.m,
        "n_list": tuple(args.n_list) if args.n_list else None,
        "master_seed": args.master_seed,
        "output_dir": args.output_dir,
        "martingale": args.martingale,
    }

    try:
        cfg = load_config(args.config, mode=args.mode, overrides=overrides)
        cache = ResultCache(enabled=not args.no_cache)
        timings = {}

        start = time.perf_counter()
        if cfg.mode == "pde":
            report = run_pde_suite(cfg, cache, args.jobs, timings, export_fields=True)
        elif cfg.mode == "hydro":
            report = run_hydro_study(cfg, cache, args.jobs, timings, export_series=True)
        else:
            report = SUITES[cfg.mode](cfg, cache, args.jobs, timings)
        timings["total"] = time.perf_counter() - start

        emit_report(report, cfg.output_dir, args.formats or ["json"])
        write_timing(cfg.output_dir, timings)
    except (FpmeError, OSError) as error:
        print(f"fpme-lab: error: {error}", file=sys.stderr)
        return EXIT_ERROR

    for check in report.failed_checks:
        logger.warning(
            "check failed: %s = %.6g (want %s %.6g)", check.name, check.value, check.relation, check.threshold
        )

    return EXIT_PASSED if report.passed else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
