"""
Command-line entry point with logging and error-to-exit-code mapping.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from pydantic import ValidationError

from src.cli.commands import COMMANDS
from src.core.config import settings
from src.core.exceptions import (
    InvalidFiberOrderError,
    InvalidSurgeryDataError,
    InvalidTorusLabelError,
    SeifertSpectralError,
)
from src.core.logging import get_logger, run_context, setup_logging
from src.models.run_config import RunConfig
from src.repositories.artifact_repository import ArtifactRepository, config_hash

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

# invalid geometry is a usage error, not a solver failure
USAGE_ERRORS = (InvalidFiberOrderError, InvalidSurgeryDataError, InvalidTorusLabelError)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=settings.APP_NAME,
        description="Spectral curves, recursion and Monte Carlo for Chern-Simons matrix models on Seifert spaces",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    for name, handler in COMMANDS.items():
        sub = commands.add_parser(name, help=(handler.__doc__ or "").strip().splitlines()[0])
        sub.add_argument("orders", nargs="+", type=int, help="exceptional-fiber orders a_1 ... a_r, or p q")
        sub.add_argument("--u", nargs="+", type=float, help="coupling; several values form a grid for invariants")
        sub.add_argument("--n", type=int, help="number of particles")
        sub.add_argument("--sweeps", type=int, help="measurement sweeps")
        sub.add_argument("--warmup", type=int, help="warm-up sweeps")
        sub.add_argument("--seed", type=int, default=0)
        sub.add_argument("--bins", type=int, default=100)
        sub.add_argument("--range", nargs=2, type=float, metavar=("LO", "HI"), help="histogram window in t")
        sub.add_argument("--out", default=settings.OUTPUT_DIR, help="output directory")
        sub.add_argument("--format", nargs="+", choices=("csv", "json"), default=["csv", "json"], dest="formats")
        sub.add_argument("--chains", type=int, default=1, help="independent Monte Carlo chains")
        sub.add_argument("--profile", choices=("desk", "paper"), default=settings.DEFAULT_PROFILE)
        sub.add_argument("--family", help="curve family or ensemble (A, B, C, D, Torus)")
        sub.add_argument("--g", type=int, dest="genus", help="genus")
        sub.add_argument("--legs", type=int, default=1, help="number of points n of omega_n")
        sub.add_argument("--grid", type=int, default=201, help="density grid size")
        sub.add_argument("--k", nargs="+", type=int, dest="ks", help="moment orders")
        sub.add_argument("--m2", type=float, help="(2,3,3) parameter m2")
    return parser


def parse_run_config(argv: Sequence[str] | None = None) -> RunConfig:
    """
    Parse the command line into a validated RunConfig.

    Raises:
        SystemExit: argparse usage error (status 2)
        ValidationError: values out of range
    """
    args = vars(build_parser().parse_args(argv))
    u = args.pop("u")
    if u is not None:
        if args["command"] == "invariants":
            args["u_grid"] = tuple(u)
        elif len(u) != 1:
            raise ValueError(f"--u takes one value for {args['command']}")
        else:
            args["u"] = u[0]
    args = {k: v for k, v in args.items() if v is not None}
    if "range" in args:
        args["range"] = tuple(args["range"])
    config = RunConfig(**args)
    return config.resolved() if config.command == "mc" else config


def main(argv: Sequence[str] | None = None) -> int:
    """Run one command; returns 0 on success, 1 on solver failure, 2 on usage errors."""
    try:
        config = parse_run_config(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    except (ValidationError, ValueError) as e:
        print(f"usage-error: {e}", file=sys.stderr)
        return EXIT_USAGE

    setup_logging(level=settings.LOG_LEVEL, json_logs=settings.JSON_LOGS, log_file=settings.LOG_FILE)
    digest = config_hash(config.hash_payload())
    repo = ArtifactRepository(config.out, meta={"command": config.command, "config_hash": digest})
    with run_context(command=config.command, geometry=config.geometry, config_hash=digest):
        try:
            logger.info("command_started")
            summary = COMMANDS[config.command](config, repo)
            repo.write_json("run_config.json", config.hash_payload())
        except USAGE_ERRORS as e:
            print(e.code, file=sys.stderr)
            logger.error("invalid_geometry", error=str(e), code=e.code)
            return EXIT_USAGE
        except SeifertSpectralError as e:
            print(e.code, file=sys.stderr)
            logger.error("command_failed", error=str(e), code=e.code)
            return EXIT_FAILURE
        logger.info("command_finished", files=len(repo.written))

    line = {"command": config.command, "config_hash": digest, "files": [str(p) for p in repo.written], **summary}
    print(json.dumps(line, sort_keys=True, default=str))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
