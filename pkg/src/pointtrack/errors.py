"""Exception hierarchy shared across the toolkit.

Two branches matter to callers: ``UserError`` covers bad input data or
configuration (the CLI maps it to exit code 2), ``InternalError`` covers
violated internal invariants (exit code 3).
"""


class TrackingError(Exception):
    """Base class for every error raised by this package."""


class UserError(TrackingError):
    """Invalid input data, configuration, or call sequence."""


class InternalError(TrackingError):
    """An internal invariant was violated; indicates a bug, not bad input."""


class DimensionError(UserError):
    """Cost matrix has an empty row or column dimension."""


class SizeError(UserError):
    """Problem exceeds the exhaustive-enumeration cap."""


class ParamError(UserError):
    """Model or tracker parameter outside its valid range."""


class NumericalError(UserError):
    """A matrix operation could not be carried out safely."""


class EmptyError(UserError):
    """An operation requiring nonempty inputs received an empty one."""


class OrderError(UserError):
    """Frames were presented out of order."""


class SpecError(UserError):
    """Invalid synthetic-scenario specification."""


class AlignmentError(UserError):
    """Tracker output and ground truth cover incompatible frames."""


class ParseError(UserError):
    """Malformed text input, located by line number.

    Attributes:
        line: 1-based line number of the offending line, or None when the
            problem is not tied to a single line.
        path: source file path, filled in by the CLI layer.
    """

    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.path = path

    def __str__(self) -> str:
        prefix = ""
        if self.path is not None:
            prefix += f"{self.path}:"
        if self.line is not None:
            prefix += f"line {self.line}: "
        elif prefix:
            prefix += " "
        return prefix + self.message
