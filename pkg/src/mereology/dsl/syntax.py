"""AST node types. Spans are excluded from equality so that reparsed
pretty-printed source compares equal to the original tree."""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from fractions import Fraction
from typing import Optional, Union

from .diagnostics import SourceSpan


def _span():
    return field(default=None, compare=False, repr=False)


# Expressions


@dataclass(frozen=True)
class Num:
    value: Fraction
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class BoolLit:
    value: bool
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Str:
    value: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Name:
    id: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Unary:
    op: str  # "-" or "not"
    operand: "Expr"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Binary:
    op: str  # arithmetic, comparison or connective
    left: "Expr"
    right: "Expr"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Abs:
    arg: "Expr"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Index:
    target: "Expr"
    index: "Expr"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Quantifier:
    kind: str  # "forall" or "exists"
    var: str
    lo: "Expr"
    hi: "Expr"
    body: "Expr"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Modal:
    kind: str  # "allows" or "ensures"
    source: Name
    target: Name
    arg: "Expr"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class ListLit:
    items: tuple["Expr", ...]
    span: Optional[SourceSpan] = _span()


Expr = Union[Num, BoolLit, Str, Name, Unary, Binary, Abs, Index, Quantifier, Modal, ListLit]


# System bodies


@dataclass(frozen=True)
class Record:
    fields: tuple[tuple[str, Expr], ...]
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Explicit:
    items: tuple[Union[Record, Str], ...]
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class RangeBinding:
    var: str
    lo: Expr
    hi: Expr
    step: Optional[Expr] = None
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class ListBinding:
    var: str
    values: ListLit
    span: Optional[SourceSpan] = _span()


Binding = Union[RangeBinding, ListBinding]


@dataclass(frozen=True)
class Grid:
    bindings: tuple[Binding, ...]
    where: Optional[Expr] = None
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Assign:
    var: str
    expr: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Simulate:
    init: Grid
    updates: tuple[Assign, ...]
    horizon: int
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Arg:
    name: str
    value: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Generator:
    name: str
    args: tuple[Arg, ...]
    span: Optional[SourceSpan] = _span()


Body = Union[Explicit, Grid, Simulate, Generator]


# Declarations


@dataclass(frozen=True)
class Let:
    name: str
    expr: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class SystemDecl:
    name: str
    lets: tuple[Let, ...]
    body: Body
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Project:
    vars: tuple[str, ...]
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class By:
    expr: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Combine:
    op: str  # "join" or "meet"
    left: Name
    right: Name
    span: Optional[SourceSpan] = _span()


PartExpr = Union[Project, By, Combine]


@dataclass(frozen=True)
class PartDecl:
    name: str
    system: Name
    expr: PartExpr
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class ConstraintDecl:
    name: str
    part: Name
    expr: Expr
    span: Optional[SourceSpan] = _span()


Decl = Union[SystemDecl, PartDecl, ConstraintDecl]


# Queries


@dataclass(frozen=True)
class ModalQuery:
    kind: str  # "allows" or "ensures"
    source: Name
    target: Name
    arg: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Designator:
    """One behavior of ``part``: by a constraint name or a selecting expression."""

    part: Name
    expr: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class RelationQuery:
    kind: str  # "compatible" or "determines"
    left: Designator
    right: Designator
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class EntailsQuery:
    lhs: Expr
    rhs: Expr
    on: Optional[Name] = None
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class PartQuery:
    kind: str  # "leq", "meet" or "join"
    left: Name
    right: Name
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class LawsQuery:
    span: Optional[SourceSpan] = _span()


QueryBody = Union[ModalQuery, RelationQuery, EntailsQuery, PartQuery, LawsQuery]


@dataclass(frozen=True)
class Query:
    body: QueryBody
    expect: Optional[Expr] = None
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class SpecAst:
    decls: tuple[Decl, ...]
    queries: tuple[Query, ...]
    span: Optional[SourceSpan] = _span()


QueryAst = Query


def children(node):
    """Direct AST children of ``node`` in field order."""
    for f in fields(node):
        if f.name == "span":
            continue
        yield from _nodes(getattr(node, f.name))


def _nodes(value):
    if isinstance(value, tuple):
        for item in value:
            yield from _nodes(item)
    elif hasattr(value, "__dataclass_fields__"):
        yield value


def walk(node):
    yield node
    for child in children(node):
        yield from walk(child)


def dump(node, indent: int = 0) -> str:
    """Indented tree dump with ``@line:col`` positions; stable across runs."""
    pad = "  " * indent
    where = f" @{node.span}" if node.span is not None else ""
    head = f"{pad}{type(node).__name__}{where}"
    scalars, nested = [], []
    for f in fields(node):
        if f.name == "span":
            continue
        value = getattr(node, f.name)
        if hasattr(value, "__dataclass_fields__"):
            nested.append((f.name, [value]))
        elif isinstance(value, tuple) and any(hasattr(v, "__dataclass_fields__") for v in _flat(value)):
            nested.append((f.name, value))
        elif value is not None:
            scalars.append(f"{f.name}={_scalar(value)}")
    lines = [head + (" " + " ".join(scalars) if scalars else "")]
    for name, items in nested:
        lines.append(f"{pad}  .{name}")
        for item in items:
            if isinstance(item, tuple):  # record field (name, expr)
                lines.append(f"{pad}    {item[0]} =")
                lines.append(dump(item[1], indent + 3))
            else:
                lines.append(dump(item, indent + 2))
    return "\n".join(lines)


def _flat(value):
    for v in value:
        if isinstance(v, tuple):
            yield from _flat(v)
        else:
            yield v


def _scalar(value) -> str:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, tuple):
        return "(" + " ".join(_scalar(v) for v in value) + ")"
    return repr(value)
