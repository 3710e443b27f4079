"""Exception types shared across the package."""

from __future__ import annotations


class MatrixFormatError(ValueError):
    """Raised when a score-matrix CSV cannot be parsed.

    Carries enough position info to point at the offending cell.
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            message = f"{where}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column


class MapFormatError(ValueError):
    """Raised when a label-map text grid is malformed."""


class EnumerationGuardError(RuntimeError):
    """Raised when exact enumeration would exceed the combinatorial guard."""


class ComponentContractError(RuntimeError):
    """Raised when a pluggable loop component violates its contract."""
