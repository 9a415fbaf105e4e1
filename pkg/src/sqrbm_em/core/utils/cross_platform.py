"""Console output helpers that survive narrow console encodings."""

import sys
from typing import Any

_ASCII_FALLBACKS = {
    "✅": "[OK]",
    "❌": "[FAIL]",
    "⚠️": "[WARN]",
    "≤": "<=",
    "≥": ">=",
    "±": "+/-",
    "Γ": "Gamma",
    "η": "eta",
    "ε": "eps",
}

_quiet = False


def set_quiet(quiet: bool) -> None:
    """Globally silence safe_print (the CLI's ``--quiet`` flag)."""
    global _quiet
    _quiet = quiet


def is_quiet() -> bool:
    return _quiet


def safe_print(*args: Any, force: bool = False, **kwargs: Any) -> None:
    """Print that falls back to ASCII when the console cannot encode a character.

    Output is suppressed in quiet mode unless ``force`` is set or the target is
    stderr.
    """
    if _quiet and not force and kwargs.get("file") is not sys.stderr:
        return
    try:
        print(*args, **kwargs)
    except UnicodeEncodeError:
        safe_args = []
        for arg in args:
            text = str(arg)
            for symbol, replacement in _ASCII_FALLBACKS.items():
                text = text.replace(symbol, replacement)
            safe_args.append(text.encode("ascii", "replace").decode("ascii"))
        print(*safe_args, **kwargs)
