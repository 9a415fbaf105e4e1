"""
Exception hierarchy for sqrbm-em.

Every error raised by the library derives from SqrbmError so callers (and the
CLI) can map failures onto stable exit codes.
"""

from __future__ import annotations

from typing import Any


class SqrbmError(Exception):
    """Root of all library errors."""


class DomainError(SqrbmError, ValueError):
    """Invalid input: spin values, indices, shapes or specification fields."""


class DivergenceInfiniteError(SqrbmError, ArithmeticError):
    """A relative entropy is infinite because the support condition fails."""


class NumericError(SqrbmError, ArithmeticError):
    """
    A computation produced non-finite values or a solver did not converge.

    Attributes:
        entry: Name of the offending parameter entry, if known
        iterate: Inner iterate index at which the failure happened, if known
        record: Partial training record preserved at the time of failure
    """

    def __init__(
        self,
        message: str,
        *,
        entry: str | None = None,
        iterate: int | None = None,
        record: Any | None = None,
    ):
        self.entry = entry
        self.iterate = iterate
        self.record = record
        super().__init__(message)


class ResourceError(SqrbmError):
    """The dense oracle was asked for more qubits than it supports."""


class ExperimentError(SqrbmError):
    """Every run of an experiment failed."""


class PlanValidationError(DomainError):
    """Validation failure of a plan, dataset spec or config file."""

    def __init__(self, source: str, errors: list[dict[str, Any]]):
        self.source = source
        self.errors = errors

        error_details = []
        for error in errors:
            loc = " -> ".join(str(x) for x in error.get("loc", []))
            msg = error.get("msg", "Unknown error")
            error_details.append(f"  {loc}: {msg}")

        message = f"Validation failed for '{source}':\n" + "\n".join(error_details)
        super().__init__(message)
