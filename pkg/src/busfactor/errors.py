"""Exception types shared across the package."""


class BusFactorError(Exception):
    """Base class for package errors."""


class ParseError(BusFactorError):
    """Malformed input file; carries the offending line number when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InfeasibleError(BusFactorError):
    """The coverage target cannot be met even when keeping everyone."""


class DegenerateError(BusFactorError):
    """The graph lacks the people or tasks the operation needs."""
