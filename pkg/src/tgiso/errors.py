"""Exception types shared across tgiso modules."""

from __future__ import annotations


class ParseError(ValueError):
    """Malformed input while parsing a temporal graph file."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyInputError(ParseError):
    """Input stream contained no edges."""


class DuplicateEdgeError(ParseError):
    """The same (src, dst, t) triple appeared more than once."""


class EmptyGraphError(ValueError):
    """Operation requires at least one timestamped edge."""


class BudgetExceededError(RuntimeError):
    """A result-size or search budget was exhausted before completion."""


class SizeCapExceededError(ValueError):
    """Input exceeds the size cap of an exhaustive search."""


class InfeasibleDegreeError(ValueError):
    """No simple k-regular graph exists for the requested parameters."""


class RetriesExhaustedError(RuntimeError):
    """A rejection-sampling loop gave up after its retry limit."""


class DeadEndError(RuntimeError):
    """A random walk reached a node without outgoing edges."""
