"""
Structured logging configuration using structlog.

Services log snake_case events with keyword fields. A CLI run wraps its work
in ``run_context`` so every event carries the command, geometry and config
hash, and a whole run can be grepped out of a JSON stream on stderr. Stdout is
left to the one-line run summary.
"""

from __future__ import annotations

import logging
import sys
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterator

import numpy as np
import structlog
from structlog.types import EventDict, FilteringBoundLogger, WrappedLogger


def plain_values(_: WrappedLogger, __: str, event_dict: EventDict) -> EventDict:
    """Exact rationals as "num/den", numpy scalars as Python numbers."""
    for key, value in event_dict.items():
        if isinstance(value, Fraction):
            event_dict[key] = f"{value.numerator}/{value.denominator}"
        elif isinstance(value, np.generic):
            event_dict[key] = value.item()
    return event_dict


def setup_logging(level: str = "INFO", json_logs: bool = True, log_file: str | None = None) -> None:
    """
    Configure structured logging for a run.

    Args:
        level: Log level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        json_logs: JSON lines when True, the console renderer otherwise
        log_file: Optional file under logs/ receiving a copy of every event
    """
    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        Path("logs").mkdir(exist_ok=True)
        handlers.append(logging.FileHandler(Path("logs") / log_file))
    logging.basicConfig(format="%(message)s", handlers=handlers, level=getattr(logging, level.upper()), force=True)

    renderer = structlog.processors.JSONRenderer(sort_keys=True) if json_logs else structlog.dev.ConsoleRenderer()
    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.stdlib.add_log_level,
            structlog.stdlib.add_logger_name,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            plain_values,
            renderer,
        ],
        wrapper_class=structlog.stdlib.BoundLogger,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )


def get_logger(name: str | None = None) -> FilteringBoundLogger:
    """
    Get a structured logger instance.

    Example:
        >>> logger = get_logger(__name__)
        >>> logger.info("orbit_enumerated", size=240, verdict="finite")
    """
    return structlog.get_logger(name or __name__)


@contextmanager
def run_context(**kwargs: Any) -> Iterator[None]:
    """
    Attach fields to every event logged inside the block.

    Example:
        >>> with run_context(command="analyze", geometry="2 3 5"):
        ...     logger.info("root_system_classified")  # carries command and geometry
    """
    structlog.contextvars.clear_contextvars()
    with structlog.contextvars.bound_contextvars(**kwargs):
        yield
