"""Reading the JSON artifacts written by the library."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from ..errors import DomainError


def read_json(path: str | Path, what: str = "File") -> Any:
    """
    Parse a JSON file.

    Raises:
        DomainError: If the content is not valid JSON
        OSError: If the file cannot be read
    """
    with open(path, encoding="utf-8") as f:
        try:
            return json.load(f)
        except (json.JSONDecodeError, UnicodeDecodeError) as e:
            raise DomainError(f"{what} {path} is not valid JSON: {e}") from e


def read_json_object(path: str | Path, what: str = "File") -> dict[str, Any]:
    """read_json, rejecting anything but a top-level object."""
    payload = read_json(path, what)
    if not isinstance(payload, dict):
        raise DomainError(f"{what} {path} does not contain a JSON object")
    return payload
