"""Exception types raised across the package."""


class QuotientBrownError(Exception):
    """Base class for all package errors."""


class MismatchedGroup(QuotientBrownError, ValueError):
    pass


class QuotientTooLarge(QuotientBrownError, ValueError):
    pass


class ParseError(QuotientBrownError, ValueError):
    """Raised by the expression parser.

    Carries the character offset where parsing failed and the set of
    tokens that would have been accepted there.
    """

    def __init__(self, message, position, expected=()):
        self.position = position
        self.expected = frozenset(expected)
        detail = f"{message} at position {position}"
        if self.expected:
            detail += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(detail)


class NonSquare(QuotientBrownError, ValueError):
    pass


class DimensionTooLarge(QuotientBrownError, ValueError):
    pass


class NoConvergence(QuotientBrownError, ArithmeticError):
    pass


class NotIntegral(QuotientBrownError, ValueError):
    pass


class OffTorus(QuotientBrownError, ValueError):
    pass


class TooLarge(QuotientBrownError, ValueError):
    pass


class UnsupportedRank(QuotientBrownError, ValueError):
    pass


class NotPrime(QuotientBrownError, ValueError):
    pass


class NotOddPrime(NotPrime):
    pass


class InvalidParams(QuotientBrownError, ValueError):
    pass


class Overflow(QuotientBrownError, OverflowError):
    pass


class ConfigError(QuotientBrownError, ValueError):
    pass


class GapWarning(UserWarning):
    """Singular values straddle the rank threshold without a clear gap."""
