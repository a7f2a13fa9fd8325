"""Exception hierarchy.

The CLI maps these onto exit codes: input problems exit 1, a failed
structural property exits 2, anything else that escapes exits 3.
"""

from __future__ import annotations


class HsolveError(Exception):
    """Base class for all library errors."""


class InputError(HsolveError, ValueError):
    """Malformed or inconsistent input data (bad indices, shapes, operators)."""


class ParseError(InputError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 source: str | None = None):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        loc = source or "<text>"
        if line is not None:
            loc += f":{line}"
            if column is not None:
                loc += f":{column}"
        super().__init__(f"{loc}: {message}")


class NotAnIdealError(InputError):
    def __init__(self, message: str, pair=None):
        self.pair = pair
        super().__init__(message)


class NotASubalgebraError(InputError):
    pass


class NotIntegrableError(InputError):
    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class NotNilpotentError(InputError):
    pass


class NotHSolvableError(InputError):
    pass


class PreconditionError(InputError):
    """An operation was called outside the regime its guarantees cover."""


class TypeMismatchError(PreconditionError):
    """A bivector is not of type (1,1) for the supplied complex structure."""


class PropertyViolation(HsolveError):
    """A structural property that should hold for valid input failed.

    Carries a diagnostic payload so callers (and the CLI) can report the
    counterexample instead of just the message.
    """

    def __init__(self, message: str, diagnostic=None):
        self.diagnostic = diagnostic
        super().__init__(message)


class CertificationError(PropertyViolation):
    pass


class InternalError(HsolveError):
    """Two independent computations disagreed; this is a bug."""
