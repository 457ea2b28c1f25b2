"""Exception hierarchy shared by every module."""


class TTPError(Exception):
    """Base class for all errors raised by ttpk."""


class DomainError(TTPError, ValueError):
    """An argument lies outside the domain an operation accepts."""


class ParseError(TTPError, ValueError):
    """Malformed instance text. Carries the 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class MetricError(DomainError):
    """Distance matrix violates zero diagonal, symmetry or the triangle inequality."""

    def __init__(self, message: str, witness: tuple[int, ...]):
        super().__init__(message)
        self.witness = witness


class CapabilityError(TTPError):
    """Request exceeds what an exact routine is willing to attempt."""


class StructuralError(TTPError, ValueError):
    """Schedule is not even well formed (day count, per-day matching)."""


class ConstructionDefect(TTPError, AssertionError):
    """The construction produced an infeasible schedule. Never expected to fire."""
