"""
Exception hierarchy shared by every module.

All library errors derive from MaxwellError so the CLI can turn them into a
machine-readable error report. The numeric ones also subclass ValueError or
RuntimeError, so callers that only know the builtin types still catch them.
"""

import sys


class MaxwellError(Exception):
    """Base class for all library errors."""

    if sys.version_info < (3, 11):

        def add_note(self, note: str) -> None:
            """Backport of BaseException.add_note (Python 3.11+)."""
            if not isinstance(note, str):
                raise TypeError("note must be a str")
            if not hasattr(self, "__notes__"):
                self.__notes__ = []
            self.__notes__.append(note)


class DomainError(MaxwellError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class InvariantError(MaxwellError, ValueError):
    """A type invariant or an asserted identity does not hold."""


class ShapeError(MaxwellError, ValueError):
    """Incompatible dimensions between operands."""


class TruncationError(InvariantError):
    """Single-particle level cutoff too small for the working temperature."""


class UnreachableEntropyError(DomainError):
    """Requested bath entropy change cannot be reached at any finite temperature."""


class DivergenceError(MaxwellError, RuntimeError):
    """Langevin integration left the simulation domain."""

    def __init__(self, message: str, step: int) -> None:
        super().__init__(message)
        self.step = step


class ContractError(InvariantError):
    """A process broke the precondition of a subsystem (e.g. the work reservoir)."""

    def __init__(self, message: str, subsystem: str) -> None:
        super().__init__(message)
        self.subsystem = subsystem


class ConfigError(MaxwellError, ValueError):
    """Invalid experiment configuration."""

    def __init__(self, message: str, key: str | None = None, line: int | None = None) -> None:
        super().__init__(message)
        self.key = key
        self.line = line
