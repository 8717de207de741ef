"""Exception hierarchy shared by all pipeline stages."""

from __future__ import annotations


class SlpError(Exception):
    """Base class for every error raised by the interpreter."""


class ParseError(SlpError):
    """Lexical or syntactic error, located by line and column."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{line}:{column}: {message}"
        super().__init__(message)


class ContextError(ParseError):
    """Default negation used outside negative context, or with a forbidden interior."""


class RangeRestrictionError(SlpError):
    def __init__(self, message: str, variables=()):
        self.variables = tuple(variables)
        super().__init__(message)


class InconsistentProgram(SlpError):
    """The empty conditional fact was derived: the program has no model."""

    def __init__(self, message: str, source=None):
        self.source = source
        super().__init__(message)


class GuardExceeded(SlpError):
    """A configured resource limit was hit; results are never truncated silently."""


class ContractError(SlpError):
    """A caller broke an operation's precondition (e.g. unmonitored default atom)."""
