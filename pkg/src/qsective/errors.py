"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: input problems exit 2, refusals
(width or enumeration bounds) exit 3.
"""


class QsectiveError(Exception):
    """Base class for all library errors."""


class DomainError(QsectiveError, ValueError):
    """An argument lies outside the domain of the operation."""


class WidthError(QsectiveError, OverflowError):
    """A value or intermediate exceeds the supported integer width."""


class BoundExceeded(QsectiveError):
    """An exhaustive enumeration would exceed its configured bound."""


class HenselError(DomainError):
    """The valuation inequality needed for Hensel lifting does not hold."""

    def __init__(self, message, *, value_valuation, derivative_valuation):
        super().__init__(message)
        self.value_valuation = value_valuation
        self.derivative_valuation = derivative_valuation


class WitnessNotFound(QsectiveError):
    """A bounded witness search ended without producing a certificate."""


class ConsistencyError(QsectiveError, AssertionError):
    """Two independent computations that must agree did not."""
