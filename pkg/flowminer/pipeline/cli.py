"""
cli.py
======
Command-line interface for the mining pipeline.

Usage:
    flowminer run --config configs/quickstart.json
    flowminer --log-level DEBUG mine --theta 0.4
    flowminer simulate --flows library:cpu_write library:coherence --instances 50
    python -m flowminer --help

Exit codes: 0 success, 1 usage or configuration error, 2 data error,
3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from ..config.settings import settings
from ..errors import ConfigError, DataError, FlowMinerError, InvariantViolation
from ..flows.core import enumerate_executions
from ..flows.loaders import describe_library, load_library
from ..mining.config import FILTERS
from ..utils.logging import get_logger, set_log_level
from .commands import cmd_eval, cmd_mine, cmd_run, cmd_simulate, cmd_slice, cmd_train
from .config import MODEL_KINDS, load_config

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INVARIANT = 3

SLICING_CHOICES = ("none", "address", "causality", "address+causality")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with code 1 instead of argparse's 2."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_overrides(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="Pipeline config file (JSON). Defaults apply when omitted.")
    p.add_argument("--flows", nargs="+", metavar="REF",
                   help="Flow files or library:<name> references (replaces the config's list)")
    p.add_argument("--out", help="Output directory")
    p.add_argument("--seed", type=int)
    p.add_argument("--instances", dest="instances_per_initiator", type=int,
                   help="Instances launched per initiator")
    p.add_argument("--traces", dest="n_traces", type=int, help="Number of simulated traces")
    p.add_argument("--delay-min", type=int)
    p.add_argument("--delay-max", type=int)
    p.add_argument("--addr-pool", dest="address_pool", type=int)
    p.add_argument("--slicing", choices=SLICING_CHOICES)
    p.add_argument("--model", choices=MODEL_KINDS)
    p.add_argument("--theta", type=float, help="Pattern threshold")
    p.add_argument("--theta-prime", type=float, help="Candidate threshold (<= theta)")
    p.add_argument("--max-len", type=int, help="Longest pattern length W")
    p.add_argument("--filters", nargs="*", choices=FILTERS, help="Mining filters to enable")
    p.add_argument("--hidden", type=int, help="LSTM hidden width")
    p.add_argument("--epochs", type=int, help="LSTM training epochs")
    p.add_argument("--lr", dest="learning_rate", type=float, help="LSTM learning rate")
    p.add_argument("--jobs", type=int, help="Worker processes for LSTM training")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="flowminer",
        description="Mine message-flow patterns from concurrent SoC traces",
    )
    parser.add_argument("--log-level", choices=LOG_LEVELS, help="Package log level for this run")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    p = sub.add_parser("simulate", help="Simulate concurrent flow instances into traces")
    _add_overrides(p)

    p = sub.add_parser("slice", help="Slice simulated traces into sub-traces")
    _add_overrides(p)
    p.add_argument("--trace-dir", type=Path, help="Directory of trace_*.jsonl (default: <out>/traces)")

    p = sub.add_parser("train", help="Train one sequence model per pattern length")
    _add_overrides(p)
    p.add_argument("--sliced-dir", type=Path, help="Sliced corpus directory (default: <out>/sliced)")

    p = sub.add_parser("mine", help="Mine patterns from trained models")
    _add_overrides(p)
    p.add_argument("--model-dir", type=Path, help="Model directory (default: <out>/models)")
    p.add_argument("--trace-dir", type=Path,
                   help="Traces for initiating-event detection (default: <out>/traces)")

    p = sub.add_parser("eval", help="Classify mined patterns against the flows")
    _add_overrides(p)
    p.add_argument("--patterns", type=Path, help="Pattern file (default: <out>/patterns.jsonl)")

    p = sub.add_parser("run", help="simulate, slice, train, mine and eval in one go")
    _add_overrides(p)

    p = sub.add_parser("library", help="List the shipped example flows")
    p.add_argument("--version", dest="library_version", help="Library version (default from settings)")
    return parser


_OVERRIDE_KEYS = (
    "flows", "out", "seed", "instances_per_initiator", "n_traces", "delay_min", "delay_max",
    "address_pool", "slicing", "model", "theta", "theta_prime", "max_len", "filters",
    "hidden", "epochs", "learning_rate", "jobs",
)


def _print_library(version: Optional[str]) -> None:
    descriptions = describe_library(version)
    for flow in load_library(version):
        lengths = sorted(len(ex.events) for ex in enumerate_executions(flow))
        print(f"{flow.name:16s} executions={len(lengths)} lengths={lengths}  {descriptions.get(flow.name, '')}")


def _dispatch(args: argparse.Namespace) -> None:
    if args.command == "library":
        _print_library(args.library_version)
        return

    try:
        settings.validate()
    except ValueError as exc:
        raise ConfigError("settings", str(exc)) from exc

    overrides = {k: getattr(args, k, None) for k in _OVERRIDE_KEYS}
    cfg = load_config(args.config, **overrides)
    logger.info("%s: config hash %s, output %s", args.command, cfg.config_hash()[:12], cfg.out_dir)

    if args.command == "simulate":
        cmd_simulate(cfg)
    elif args.command == "slice":
        cmd_slice(cfg, args.trace_dir)
    elif args.command == "train":
        cmd_train(cfg, args.sliced_dir)
    elif args.command == "mine":
        cmd_mine(cfg, args.model_dir, args.trace_dir)
    elif args.command == "eval":
        print(cmd_eval(cfg, args.patterns).summary())
    elif args.command == "run":
        print(cmd_run(cfg).summary())


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.log_level:
        set_log_level(getattr(logging, args.log_level))
    try:
        _dispatch(args)
    except ConfigError as exc:
        logger.error("configuration error: %s", exc)
        return EXIT_USAGE
    except DataError as exc:
        logger.error("%s", exc)
        return EXIT_DATA
    except InvariantViolation as exc:
        logger.error("internal invariant violated: %s", exc, exc_info=True)
        return EXIT_INVARIANT
    except FlowMinerError as exc:
        logger.error("%s", exc)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
