"""Exception types raised by the library.

Every exception derives from :class:`LevinTypeError`, itself a ``ValueError``,
so callers that only care about bad input can catch one type.
"""

from __future__ import annotations


class LevinTypeError(ValueError):
    """Base class for all library errors."""


class InputSizeError(LevinTypeError):
    """A window or sequence is too short for the requested order."""


class SingularPointsError(LevinTypeError):
    """Interpolation points coincide where they must be distinct."""


class ZeroEstimateError(LevinTypeError):
    """A remainder estimate vanished."""

    def __init__(self, n: int, message: str | None = None):
        self.n = n
        super().__init__(message or f"remainder estimate is zero at n={n}")


class DegenerateVariantError(LevinTypeError):
    """The v variant needs consecutive terms to differ."""

    def __init__(self, n: int):
        self.n = n
        super().__init__(f"v variant undefined: a_{n} == a_{n + 1}")


class DeltaZeroError(LevinTypeError):
    """A generalized difference divisor vanished."""

    def __init__(self, n: int, k: int, name: str = "delta"):
        self.n = n
        self.k = k
        super().__init__(f"{name} is zero at n={n}, k={k}")


class PoleError(LevinTypeError):
    """A limiting stability index was requested at one of its poles."""


class InsufficientDataError(LevinTypeError):
    """Neighbouring table cells needed for an estimate are missing or singular."""


class DomainError(LevinTypeError):
    """Parameters lie outside the domain of a formula."""


class ConfigError(LevinTypeError):
    """An experiment configuration failed validation."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class PreconditionError(LevinTypeError):
    """A documented precondition of an algorithm does not hold."""


class DegenerateCoefficientError(LevinTypeError):
    """A series coefficient needed as a divisor is zero."""
