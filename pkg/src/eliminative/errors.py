from __future__ import annotations


class EliminativeError(Exception):
    """Base class for every error raised by this package."""


class KBError(EliminativeError, ValueError):
    """Invalid knowledge-base content. ``line`` is set when it came from a file."""

    def __init__(self, message: str, line: int | None = None):
        self.message = message
        self.line = line
        super().__init__(str(self))

    def __str__(self) -> str:
        if self.line is None:
            return self.message
        return f"line {self.line}: {self.message}"


class EmptySide(KBError):
    pass


class InvalidId(KBError):
    pass


class DuplicateId(KBError):
    pass


class ParseError(EliminativeError, ValueError):
    def __init__(self, line: int, column: int, message: str):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(str(self))

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.message}"


class ArityError(ParseError):
    pass


class DepthExceeded(EliminativeError):
    pass


class UnboundResult(EliminativeError):
    pass
