"""Evaluation of elaborated queries against a model."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from .. import core
from ..core import Part, render_label
from ..laws import law_suite
from ..models import SystemModel
from . import printer
from . import syntax as ast
from .diagnostics import elab_error
from .elaborate import FINITE_HORIZON_NOTE, Interpreter, _has_quantifier


@dataclass
class QueryResult:
    query: str
    kind: str
    value: Any
    witnesses: list = field(default_factory=list)
    expected: Any = None
    holds: Optional[bool] = None
    notes: list[str] = field(default_factory=list)

    @property
    def falsified(self) -> bool:
        return self.holds is False

    def to_json(self) -> dict:
        out = {"query": self.query, "kind": self.kind, "value": self.value, "witnesses": self.witnesses}
        if self.expected is not None:
            out["expected"] = self.expected
        out["holds"] = self.holds
        if self.notes:
            out["notes"] = self.notes
        return out


def _labels(part: Part, bits) -> list[str]:
    return [render_label(part.codomain[i]) for i in np.flatnonzero(bits)]


def _system_label(model: SystemModel, s: int) -> str:
    return render_label(model.system[int(s)])


def _notes(model: SystemModel, q: ast.Query) -> list[str]:
    quantified = _has_quantifier(q)
    names = {n.id for n in ast.walk(q) if isinstance(n, ast.Name)}
    quantified = quantified or any(n in model.meta.get("notes", {}) for n in names)
    return [FINITE_HORIZON_NOTE] if quantified else []


def _expect_bool(interp: Interpreter, q: ast.Query) -> Optional[bool]:
    if q.expect is None:
        return None
    v = interp.const(q.expect)
    if not isinstance(v, bool):
        raise elab_error("expected value for a yes/no query must be true or false", q.expect.span)
    return v


def _point(interp: Interpreter, d: ast.Designator) -> tuple[Part, int]:
    part = interp.part(d.part)
    bits = interp.part_bits(d.expr, part)
    hits = np.flatnonzero(bits)
    if len(hits) != 1:
        raise elab_error(
            f"designator selects {len(hits)} behaviors of {part.name}; exactly one is required", d.expr.span
        )
    return part, int(hits[0])


def _modal(model, interp, q: ast.Query, body: ast.ModalQuery, result: QueryResult):
    target = interp.part(body.target)
    bits = interp.modal_bits(body.kind, body.source, body.target, body.arg)
    result.value = {"part": target.name, "count": int(bits.sum()), "size": len(target), "labels": _labels(target, bits)}
    if q.expect is not None:
        want = interp.part_bits(q.expect, target)
        result.expected = _labels(target, want)
        result.holds = bool(np.array_equal(want, bits))


def _relation(model, interp, q, body: ast.RelationQuery, result: QueryResult):
    p, a = _point(interp, body.left)
    r, b = _point(interp, body.right)
    hit = (p.map == a) & (r.map == b)
    if body.kind == "compatible":
        result.value = bool(hit.any())
        if result.value:
            result.witnesses = [{"behavior": _system_label(model, np.flatnonzero(hit)[0])}]
    else:
        miss = (p.map == a) & (r.map != b)
        result.value = not miss.any()
        if not result.value:
            result.witnesses = [{"counterexample": _system_label(model, np.flatnonzero(miss)[0])}]
    expected = _expect_bool(interp, q)
    if expected is not None:
        result.expected, result.holds = expected, result.value == expected


def _entails(model, interp, q, body: ast.EntailsQuery, result: QueryResult):
    if body.on is not None:
        part = interp.part(body.on)
        lhs, rhs = interp.part_bits(body.lhs, part), interp.part_bits(body.rhs, part)
    else:
        part = model.parts["Top"]
        lhs, rhs = interp.system_bits(body.lhs), interp.system_bits(body.rhs)
    bad = lhs & ~rhs
    result.value = not bad.any()
    if bad.any():
        result.witnesses = [{"counterexample": render_label(part.codomain[int(np.flatnonzero(bad)[0])])}]
    expected = _expect_bool(interp, q)
    if expected is not None:
        result.expected, result.holds = expected, result.value == expected


def _blocks(model: SystemModel, part: Part) -> list[list[str]]:
    return [[_system_label(model, s) for s in block] for block in part.fibers]


def _same_as(model: SystemModel, part: Part) -> list[str]:
    return [name for name, p in model.parts.items() if core.same_partition(p, part)]


def _part_query(model, interp, q, body: ast.PartQuery, result: QueryResult):
    p, r = interp.part(body.left), interp.part(body.right)
    if body.kind == "leq":
        w = core.part_leq(p, r)
        result.value = w is not None
        if w is not None:
            result.witnesses = [
                {"from": render_label(r.codomain[i]), "to": render_label(p.codomain[int(j)])}
                for i, j in enumerate(w.factor)
            ]
        else:
            s, t = _split_pair(r, p)
            result.witnesses = [{"counterexample": [_system_label(model, s), _system_label(model, t)]}]
        expected = _expect_bool(interp, q)
        if expected is not None:
            result.expected, result.holds = expected, result.value == expected
        return
    combined = core.join(p, r) if body.kind == "join" else core.meet(p, r)
    result.value = {"size": len(combined), "same_as": _same_as(model, combined)}
    result.witnesses = _blocks(model, combined)
    if q.expect is not None:
        if not isinstance(q.expect, ast.Name):
            raise elab_error(f"expected value for {body.kind} must be a part name", q.expect.span)
        want = interp.part(q.expect)
        result.expected = want.name
        result.holds = core.same_partition(want, combined)


def _split_pair(same: Part, differ: Part) -> tuple[int, int]:
    """Two system behaviors that ``same`` identifies but ``differ`` separates."""
    for block in same.fibers:
        first = block[0]
        for s in block[1:]:
            if differ.map[s] != differ.map[first]:
                return first, s
    raise AssertionError("parts are ordered")


def _laws(model, interp, q, body, result: QueryResult):
    reports = law_suite(model, seed=0)
    result.value = all(r.passed for r in reports)
    result.witnesses = [r.to_json() for r in reports]
    expected = _expect_bool(interp, q)
    result.expected = expected
    result.holds = result.value if expected is None else result.value == expected


_DISPATCH = {
    ast.ModalQuery: _modal,
    ast.RelationQuery: _relation,
    ast.EntailsQuery: _entails,
    ast.PartQuery: _part_query,
    ast.LawsQuery: _laws,
}


def query_kind(q: ast.Query) -> str:
    body = q.body
    if isinstance(body, ast.LawsQuery):
        return "laws"
    if isinstance(body, ast.EntailsQuery):
        return "entails"
    return body.kind


def eval_query(model: SystemModel, q: ast.Query) -> QueryResult:
    """Evaluate ``q``; name and type errors raise ``ElaborationError``."""
    interp = Interpreter(model)
    result = QueryResult(printer.query(q, keyword=False), query_kind(q), None)
    _DISPATCH[type(q.body)](model, interp, q, q.body, result)
    result.notes = _notes(model, q)
    return result
