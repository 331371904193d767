"""Exception taxonomy shared by all invopt modules.

The CLI maps these onto exit codes: I/O problems exit 2, anything raised
from this hierarchy exits 3.
"""


class InvOptError(Exception):
    """Base class for all errors raised by invopt."""


class DomainError(InvOptError, ValueError):
    """An argument violates an operation's precondition."""


class ValidationError(InvOptError, ValueError):
    """Input data or configuration fails a consistency check."""


class ParseError(ValidationError):
    """A text input could not be parsed; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NumericalError(InvOptError, RuntimeError):
    """A numerical routine failed beyond its recovery policy."""


class StateError(InvOptError, RuntimeError):
    """An object was used before reaching the required state."""
