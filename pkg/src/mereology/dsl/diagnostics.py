"""Source spans and diagnostics shared by the lexer, parser and elaborator."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional


@dataclass(frozen=True)
class SourceSpan:
    """Half-open byte range ``[start, end)`` plus the 1-based line/column of ``start``.

    Columns count characters, not bytes.
    """

    start: int
    end: int
    line: int
    column: int

    def cover(self, other: "SourceSpan") -> "SourceSpan":
        """Smallest span containing both; ``self`` must start first."""
        return SourceSpan(self.start, max(self.end, other.end), self.line, self.column)

    def to_json(self) -> dict:
        return {"start": self.start, "end": self.end, "line": self.line, "column": self.column}

    def __str__(self):
        return f"{self.line}:{self.column}"


@dataclass
class Diagnostic:
    message: str
    span: SourceSpan
    phase: str = "parse"
    expected: tuple[str, ...] = ()
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"severity": "error", "phase": self.phase, "message": self.message, "span": self.span.to_json()}
        if self.expected:
            out["expected"] = list(self.expected)
        return out

    def render(self, source: Optional[str] = None, path: str = "<input>") -> str:
        text = f"{path}:{self.span}: error: {self.message}"
        # a single expectation is already spelled out by "expected X, found Y"
        if self.expected and not (len(self.expected) == 1 and self.message.startswith("expected ")):
            text += " (expected " + _one_of(self.expected) + ")"
        if source is not None:
            lines = source.split("\n")
            if 0 < self.span.line <= len(lines):
                line = lines[self.span.line - 1]
                text += "\n  " + line + "\n  " + " " * (self.span.column - 1) + "^"
        return text


def _one_of(items) -> str:
    items = list(items)
    if len(items) == 1:
        return items[0]
    return "one of " + ", ".join(items)


class DslError(Exception):
    """A single diagnostic raised out of the front end."""

    def __init__(self, diagnostic: Diagnostic):
        super().__init__(str(diagnostic.span) + ": " + diagnostic.message)
        self.diagnostic = diagnostic


class ParseError(DslError):
    pass


class ElaborationError(DslError):
    pass


def parse_error(message, span, expected=()) -> ParseError:
    return ParseError(Diagnostic(message, span, "parse", tuple(expected)))


def elab_error(message, span) -> ElaborationError:
    return ElaborationError(Diagnostic(message, span, "elaborate"))
