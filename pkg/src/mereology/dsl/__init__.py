"""Front end for ``.msys`` specifications: lexer, parser, printer, elaborator
and query evaluator."""

from .diagnostics import Diagnostic, DslError, ElaborationError, ParseError, SourceSpan
from .elaborate import elaborate
from .parser import parse, parse_expr, parse_query
from .printer import pretty
from .query import QueryResult, eval_query
from .syntax import QueryAst, SpecAst, dump


def load(text: str):
    """Parse and elaborate ``text``; returns ``(model, queries)``."""
    return elaborate(parse(text))


__all__ = [
    "Diagnostic",
    "DslError",
    "ElaborationError",
    "ParseError",
    "QueryAst",
    "QueryResult",
    "SourceSpan",
    "SpecAst",
    "dump",
    "elaborate",
    "eval_query",
    "load",
    "parse",
    "parse_expr",
    "parse_query",
    "pretty",
]
