"""Logging, console and file helpers."""

from .cross_platform import is_quiet, safe_print, set_quiet
from .json_files import read_json, read_json_object
from .logging_config import configure_structlog, setup_logging

__all__ = [
    "configure_structlog",
    "is_quiet",
    "read_json",
    "read_json_object",
    "safe_print",
    "set_quiet",
    "setup_logging",
]
