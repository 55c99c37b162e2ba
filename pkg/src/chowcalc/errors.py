class ChowError(Exception):
    """Base class for every error raised by chowcalc."""


class UsageError(ChowError, ValueError):
    """Operands or parameters violate a documented precondition."""


class NotProperError(UsageError):
    """Pushforward or integration requested along a map that is not proper."""


class InvariantViolation(ChowError):
    """An internal consistency check failed; the computation cannot be trusted."""

    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = witness or {}
