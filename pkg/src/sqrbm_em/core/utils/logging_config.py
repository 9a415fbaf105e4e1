"""
Centralized logging configuration for sqrbm-em.

The stdlib root logger owns the handlers; structlog renders key/value events and
hands them to it, so ``structlog.get_logger(__name__)`` in any module lands in the
same place. File logging is opt-in: commands must not write outside the paths
they were given.
"""

from __future__ import annotations

import logging
import os
import sys
from pathlib import Path

import structlog

_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
_PACKAGE = "sqrbm_em"


def configure_structlog() -> None:
    """Route structlog through the stdlib logging hierarchy."""
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_log_level,
            structlog.processors.format_exc_info,
            structlog.processors.KeyValueRenderer(key_order=["event"], sort_keys=True),
        ],
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=False,
    )


def _level_number(level: str | int | None) -> int:
    if level is None:
        level = os.getenv("LOG_LEVEL", "INFO")
    if isinstance(level, int):
        return level
    number = logging.getLevelName(str(level).upper())
    return number if isinstance(number, int) else logging.INFO


def _attach_file_handler(root: logging.Logger, path: Path, level: int) -> None:
    target = str(path.resolve())
    for handler in root.handlers:
        if isinstance(handler, logging.FileHandler) and handler.baseFilename == target:
            handler.setLevel(level)
            return
    path.parent.mkdir(parents=True, exist_ok=True)
    handler = logging.FileHandler(path, encoding="utf-8")
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(_FORMAT))
    root.addHandler(handler)


def setup_logging(
    level: str | int | None = None, *, log_to_file: bool = False, unified_file: str | None = None
) -> None:
    """Configure root, package and structlog loggers.

    Safe to call repeatedly: the stderr handler and the file handler are only
    added once, later calls just change levels.

    Args:
        level: Level name or number; LOG_LEVEL (default INFO) when None
        log_to_file: Also write to unified_file
        unified_file: Log file path; LOG_FILE_PATH when None, no file when unset
    """
    resolved = _level_number(level)
    root = logging.getLogger()
    if root.handlers:
        root.setLevel(resolved)
    else:
        logging.basicConfig(level=resolved, format=_FORMAT, stream=sys.stderr)

    logging.getLogger(_PACKAGE).setLevel(resolved)
    # matplotlib is chatty at DEBUG
    logging.getLogger("matplotlib").setLevel(max(resolved, logging.WARNING))
    configure_structlog()

    path = unified_file or os.getenv("LOG_FILE_PATH")
    if not (log_to_file and path):
        return
    try:
        _attach_file_handler(root, Path(path), resolved)
    except OSError as e:
        print(f"Warning: file logging disabled: {e}", file=sys.stderr)
