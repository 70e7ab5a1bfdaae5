"""Canonical source rendering of syntax trees.

Output reparses to an equal tree: parentheses are inserted exactly where
operator precedence requires them.
"""

from __future__ import annotations

from ..core import _render_number
from . import syntax as ast
from .lexer import KEYWORDS

# binding strength; a quantifier's body runs to the end, so it binds loosest
_PREC = {"implies": 1, "or": 2, "and": 3, "=": 5, "!=": 5, "<": 5, "<=": 5, ">": 5, ">=": 5, "+": 6, "-": 6, "*": 7, "/": 7}
_NOT, _NEG, _POSTFIX, _ATOM = 4, 8, 9, 10


def _wrap(text: str, prec: int, need: int) -> str:
    return f"({text})" if prec < need else text


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _is_ident(s: str) -> bool:
    return (
        s.isascii()
        and s.replace("_", "a").isalnum()
        and not s[0].isdigit()
        and s not in KEYWORDS
    )


def _expr(e) -> tuple[str, int]:
    if isinstance(e, ast.Num):
        return _render_number(e.value), _ATOM
    if isinstance(e, ast.BoolLit):
        return ("true" if e.value else "false"), _ATOM
    if isinstance(e, ast.Str):
        return _quote(e.value), _ATOM
    if isinstance(e, ast.Name):
        return e.id, _ATOM
    if isinstance(e, ast.ListLit):
        return "[" + ", ".join(expr(x) for x in e.items) + "]", _ATOM
    if isinstance(e, ast.Abs):
        return f"abs({expr(e.arg)})", _ATOM
    if isinstance(e, ast.Modal):
        return f"{e.kind}({e.source.id} -> {e.target.id}, {expr(e.arg)})", _ATOM
    if isinstance(e, ast.Index):
        return f"{operand(e.target, _POSTFIX)}[{expr(e.index)}]", _POSTFIX
    if isinstance(e, ast.Unary):
        if e.op == "not":
            return "not " + operand(e.operand, _NOT), _NOT
        return "-" + operand(e.operand, _NEG), _NEG
    if isinstance(e, ast.Binary):
        p = _PREC[e.op]
        if e.op == "implies":
            left, right = p + 1, p
        elif p == 5:
            left = right = p + 1
        else:
            left, right = p, p + 1
        return f"{operand(e.left, left)} {e.op} {operand(e.right, right)}", p
    if isinstance(e, ast.Quantifier):
        return f"{e.kind} {e.var} in {operand(e.lo, 6)} .. {operand(e.hi, 6)}: {expr(e.body)}", 0
    raise TypeError(f"not an expression node: {type(e).__name__}")


def operand(e, need: int) -> str:
    text, prec = _expr(e)
    return _wrap(text, prec, need)


def expr(e) -> str:
    return _expr(e)[0]


def _binding(b) -> str:
    if isinstance(b, ast.ListBinding):
        return f"{b.var} in {expr(b.values)}"
    text = f"{b.var} in {operand(b.lo, 6)} .. {operand(b.hi, 6)}"
    if b.step is not None:
        text += f" step {operand(b.step, 6)}"
    return text


def _grid(g: ast.Grid) -> str:
    text = "grid " + ", ".join(_binding(b) for b in g.bindings)
    if g.where is not None:
        text += " where " + expr(g.where)
    return text


def _item(item) -> str:
    if isinstance(item, ast.Str):
        return item.value if _is_ident(item.value) else _quote(item.value)
    return "{" + ", ".join(f"{k} = {expr(v)}" for k, v in item.fields) + "}"


def _body(b) -> str:
    if isinstance(b, ast.Explicit):
        return "[" + ", ".join(_item(i) for i in b.items) + "]"
    if isinstance(b, ast.Grid):
        return _grid(b)
    if isinstance(b, ast.Simulate):
        updates = "\n".join(f"    {a.var} := {expr(a.expr)}" for a in b.updates)
        return f"simulate init {_grid(b.init)}\n  update\n{updates}\n  horizon {b.horizon}"
    if isinstance(b, ast.Generator):
        return f"generator {b.name}(" + ", ".join(f"{a.name} = {expr(a.value)}" for a in b.args) + ")"
    raise TypeError(f"not a system body: {type(b).__name__}")


def _part_expr(p) -> str:
    if isinstance(p, ast.Project):
        return "project(" + " ".join(p.vars) + ")"
    if isinstance(p, ast.By):
        return f"by({expr(p.expr)})"
    return f"{p.op}({p.left.id}, {p.right.id})"


def decl(d) -> str:
    if isinstance(d, ast.SystemDecl):
        lines = [f"system {d.name} {{"]
        lines += [f"  let {x.name} = {expr(x.expr)}" for x in d.lets]
        lines.append("  behaviors: " + _body(d.body))
        lines.append("}")
        return "\n".join(lines)
    if isinstance(d, ast.PartDecl):
        return f"part {d.name} of {d.system.id} = {_part_expr(d.expr)}"
    return f"constraint {d.name} on {d.part.id} = {expr(d.expr)}"


def _designator(d: ast.Designator) -> str:
    if isinstance(d.expr, ast.Name):
        return f"{d.part.id}.{d.expr.id}"
    return f"{d.part.id}.({expr(d.expr)})"


def query_body(q) -> str:
    if isinstance(q, ast.ModalQuery):
        return f"{q.kind}({q.source.id} -> {q.target.id}, {expr(q.arg)})"
    if isinstance(q, ast.RelationQuery):
        return f"{q.kind}({_designator(q.left)}, {_designator(q.right)})"
    if isinstance(q, ast.EntailsQuery):
        text = f"entails({expr(q.lhs)}, {expr(q.rhs)})"
        return text + (f" on {q.on.id}" if q.on is not None else "")
    if isinstance(q, ast.PartQuery):
        return f"{q.kind}({q.left.id}, {q.right.id})"
    return "laws"


def query(q: ast.Query, keyword: bool = True) -> str:
    text = ("query " if keyword else "") + query_body(q.body)
    if q.expect is not None:
        text += " expect " + expr(q.expect)
    return text


def pretty(spec: ast.SpecAst) -> str:
    chunks = [decl(d) for d in spec.decls]
    out = "\n".join(chunks)
    if spec.queries:
        out += "\n\n" + "\n".join(query(q) for q in spec.queries)
    return out + "\n"
