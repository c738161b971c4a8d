"""Exception hierarchy shared by every module."""

from __future__ import annotations


class SkeinError(Exception):
    """Base class for all package errors."""


class SizeLimitError(SkeinError):
    pass


class RingMismatchError(SkeinError):
    pass


class TermLimitError(SkeinError):
    pass


class InvalidWordError(SkeinError):
    pass


class SpecError(SkeinError):
    pass


class StateError(SkeinError):
    pass


class UnsupportedConfiguration(SkeinError):
    pass


class BudgetExceeded(SkeinError):
    """Gröbner computation ran out of pair reductions.

    ``partial`` holds the (non-reduced) generating set reached so far.
    """

    def __init__(self, message: str, partial=None, used: int = 0):
        super().__init__(message)
        self.partial = partial if partial is not None else []
        self.used = used


class ParseError(SkeinError):
    def __init__(self, message: str, line: int, column: int, source: str = ""):
        self.line = line
        self.column = column
        self.source = source
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{line}:{column}: {message}")
