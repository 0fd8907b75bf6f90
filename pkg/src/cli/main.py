"""
Command-line entry point.

    maxwell run    --config configs/szilard.toml [--seed N] [--out PATH] [--format csv|json] [--threads N]
    maxwell sweep  --config configs/erasure_sweep.toml
    maxwell verify [--quick] [--inject-fault CRITERION] [--only CRITERION ...] [--format text|json]

Errors are printed to stderr as one JSON object. Exit status: 0 on success,
2 for configuration and usage errors, 1 for everything else (including a
failed verify criterion).
"""

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from typing import Any

from src.cli.config import OUTPUT_FORMATS, load_config
from src.cli.runner import run, sweep
from src.cli.verify import CRITERIA, print_report, verify
from src.common.data_loader import to_json_text
from src.common.errors import ConfigError, MaxwellError
from src.common.log_config import configure_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


def _add_run_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True, help="TOML or JSON experiment config")
    parser.add_argument("--seed", type=int, default=None, help="Master seed (unsigned 64-bit), overrides the file")
    parser.add_argument("--out", default=None, help="Output path, overrides the file")
    parser.add_argument("--format", choices=OUTPUT_FORMATS, default=None, help="Output format, overrides the file")
    parser.add_argument("--threads", type=int, default=None, help="Worker threads (default: MAXWELL_THREADS or 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maxwell",
        description="Run information-thermodynamics experiments from config files.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Show INFO logs on the console")
    commands = parser.add_subparsers(dest="command", required=True)

    _add_run_options(commands.add_parser("run", help="Run one experiment"))
    _add_run_options(commands.add_parser("sweep", help="Run an experiment over its [grid]"))

    check = commands.add_parser("verify", help="Run the acceptance suite")
    check.add_argument("--quick", action="store_true", help="Reduced ensemble sizes")
    check.add_argument("--inject-fault", choices=list(CRITERIA), default=None, help="Force a named failure")
    check.add_argument("--only", choices=list(CRITERIA), nargs="+", default=None, help="Run a subset")
    check.add_argument("--format", choices=("text", "json"), default="text")
    check.add_argument("--threads", type=int, default=None)
    return parser


def error_payload(exc: BaseException) -> dict[str, Any]:
    """Machine-readable description of a failure."""
    payload: dict[str, Any] = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ConfigError):
        payload["key"] = exc.key
        payload["line"] = exc.line
    step = getattr(exc, "step", None)
    if step is not None:
        payload["step"] = step
    subsystem = getattr(exc, "subsystem", None)
    if subsystem is not None:
        payload["subsystem"] = subsystem
    notes = getattr(exc, "__notes__", None)
    if notes:
        payload["context"] = list(notes)
    return payload


def _execute(args: argparse.Namespace) -> int:
    if args.command == "verify":
        report = verify(quick=args.quick, inject_fault=args.inject_fault, only=args.only, threads=args.threads)
        if args.format == "json":
            print(to_json_text(report.to_json()))
        else:
            print_report(report)
        return EXIT_OK if report.passed else EXIT_FAILURE

    config = load_config(args.config).with_overrides(args.seed, args.out, args.format)
    manifest = sweep(config, args.threads) if args.command == "sweep" else run(config, args.threads)
    print(to_json_text(manifest.to_json()))
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(logging.INFO if args.verbose else logging.WARNING)
    try:
        return _execute(args)
    except ConfigError as exc:
        print(json.dumps(error_payload(exc)), file=sys.stderr)
        return EXIT_CONFIG
    except MaxwellError as exc:
        logger.info("experiment failed", exc_info=True)
        print(json.dumps(error_payload(exc)), file=sys.stderr)
        return EXIT_FAILURE
    except Exception as exc:
        logger.info("unexpected failure", exc_info=True)
        print(json.dumps(error_payload(exc)), file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
