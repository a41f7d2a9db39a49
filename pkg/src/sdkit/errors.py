"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class SdkitError(Exception):
    """Base class for library errors."""


class DimensionMismatch(SdkitError):
    pass


class OutOfTruncation(SdkitError):
    """An operation needs simplices above the stored dimension bound."""


class InvalidSSet(SdkitError):
    def __init__(self, message: str, witnesses: list | None = None):
        super().__init__(message)
        self.witnesses = witnesses or []


class InvalidCategory(SdkitError):
    def __init__(self, message: str, witnesses: list | None = None):
        super().__init__(message)
        self.witnesses = witnesses or []


class InvalidMap(SdkitError):
    pass


class NotDiscFib(SdkitError):
    pass


class NotRightFibration(SdkitError):
    pass


class NonCommuting(SdkitError):
    pass


class BudgetExceeded(SdkitError):
    pass


class RouteDisagreement(SdkitError):
    pass
