"""Exception types shared across the package."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional


class GpmlError(Exception):
    """Base class for every error raised by this package."""


# -- graph errors -----------------------------------------------------------


class GraphError(GpmlError):
    code = "GraphError"


class DuplicateId(GraphError):
    code = "DuplicateId"


class UnknownEndpoint(GraphError):
    code = "UnknownEndpoint"


class UnknownNode(GraphError):
    code = "UnknownNode"


class Malformed(GraphError):
    code = "Malformed"


# -- query errors -----------------------------------------------------------


def line_col(text: str, offset: int) -> tuple[int, int]:
    """1-based line and column of a character offset."""
    offset = max(0, min(offset, len(text)))
    line = text.count("\n", 0, offset) + 1
    start = text.rfind("\n", 0, offset) + 1
    return line, offset - start + 1


@dataclass(frozen=True)
class Diagnostic:
    code: str
    offset: int
    message: str
    line: int = 0
    column: int = 0

    def located(self, text: str) -> "Diagnostic":
        line, col = line_col(text, self.offset)
        return Diagnostic(self.code, self.offset, self.message, line, col)

    def to_json(self) -> str:
        return json.dumps(
            {"code": self.code, "line": self.line, "column": self.column,
             "message": self.message}
        )

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.code}: {self.message}"


class QueryError(GpmlError):
    """One or more diagnostics produced while reading or checking a query."""

    def __init__(self, diagnostics: list[Diagnostic], text: Optional[str] = None):
        if text is not None:
            diagnostics = [d.located(text) for d in diagnostics]
        self.diagnostics = sorted(diagnostics, key=lambda d: (d.offset, d.code))
        super().__init__("; ".join(str(d) for d in self.diagnostics))

    @property
    def codes(self) -> list[str]:
        return [d.code for d in self.diagnostics]


class LexError(QueryError):
    def __init__(self, offset: int, message: str, text: Optional[str] = None):
        self.position = offset
        super().__init__([Diagnostic("LexError", offset, message)], text)


class ParseError(QueryError):
    def __init__(self, offset: int, expected: str, text: Optional[str] = None):
        self.position = offset
        self.expected = expected
        super().__init__([Diagnostic("ParseError", offset, f"expected {expected}")], text)


class AnalysisError(QueryError):
    pass


class CapExceeded(GpmlError):
    code = "CapExceeded"
