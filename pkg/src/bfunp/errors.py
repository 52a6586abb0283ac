"""Exception types shared across the package."""


class BfunError(Exception):
    """Base class for package errors."""


class PolySyntaxError(BfunError, ValueError):
    """Raised when a polynomial expression does not match the grammar."""

    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class AmbientMismatch(BfunError, ValueError):
    """Raised when polynomials from different rings are combined."""


class CappedError(BfunError):
    """A computation exceeded its configured degree or term budget."""


class IndeterminateError(BfunError):
    """A check cannot be decided because some jump is only known up to an interval."""

    def __init__(self, message, blocking=()):
        super().__init__(message)
        self.blocking = tuple(blocking)
