"""Elaboration of parsed specs into ``SystemModel`` values.

Expressions are interpreted once per system behavior. A behavior whose label
is a tuple of ``(name, value)`` pairs binds each name; any other label binds
``self``. Constraint expressions are evaluated over system behaviors and must
be constant on the fibers of the part they are declared on.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Any, Mapping, Optional

import numpy as np

from .. import core, models
from ..core import BehaviorType, MereologyError, Part, render_label
from ..logic import Constraint, _allows, _ensures
from ..models import SystemModel
from . import syntax as ast
from .diagnostics import elab_error

FINITE_HORIZON_NOTE = "quantifiers range over the declared finite horizon only"

_GENERATORS = {
    "bicycle": ("r",),
    "water": ("k", "R", "temps", "horizon", "windows"),
    "ecosystem": ("d_f", "b_r", "c_f", "c_r", "horizon", "deadlines"),
    "random": ("seed", "size", "parts"),
}


def type_name(v) -> str:
    if isinstance(v, bool):
        return "boolean"
    if isinstance(v, Fraction):
        return "number"
    if isinstance(v, str):
        return "string"
    if isinstance(v, tuple):
        return "series"
    return type(v).__name__


def behavior_vars(label) -> dict:
    if isinstance(label, tuple) and label and all(
        isinstance(kv, tuple) and len(kv) == 2 and isinstance(kv[0], str) for kv in label
    ):
        return dict(label)
    return {"self": label}


def _has_quantifier(e) -> bool:
    return any(isinstance(n, ast.Quantifier) for n in ast.walk(e))


class Scope:
    """Evaluation context for one expression evaluation."""

    __slots__ = ("vars", "s", "bound")

    def __init__(self, vars: Mapping[str, Any], s: Optional[int] = None, bound: Optional[dict] = None):
        self.vars = vars
        self.s = s
        self.bound = bound or {}


class Interpreter:
    def __init__(self, model: Optional[SystemModel] = None, lets: Optional[dict] = None):
        self.model = model
        self.lets = dict(lets if lets is not None else (model.params if model else {}))
        self.envs = [behavior_vars(label) for label in model.system.labels] if model else []
        self._modal_cache: dict = {}

    @property
    def variables(self) -> set:
        return set(self.envs[0]) if self.envs else set()

    # name checks, done before evaluation so errors surface regardless of short-circuiting

    def check(self, e, vars: set, bound: frozenset = frozenset()):
        if isinstance(e, ast.Name):
            self._check_name(e, vars, bound)
        elif isinstance(e, ast.Quantifier):
            self.check(e.lo, vars, bound)
            self.check(e.hi, vars, bound)
            self.check(e.body, vars, bound | {e.var})
        elif isinstance(e, ast.Modal):
            self.part(e.source)
            self.part(e.target)
            self.check(e.arg, self.variables, bound)
        else:
            for child in ast.children(e):
                self.check(child, vars, bound)

    def _check_name(self, e: ast.Name, vars, bound):
        if e.id in bound or e.id in vars or e.id in self.lets:
            return
        if self.model is not None:
            if e.id in self.model.constraints:
                return
            if e.id in self.model.parts:
                raise elab_error(f"part {e.id} used where a value is expected", e.span)
        raise elab_error(f"unknown name {e.id!r}", e.span)

    def part(self, name: ast.Name) -> Part:
        try:
            return self.model.parts[name.id]
        except KeyError:
            raise elab_error(f"unknown part {name.id!r}", name.span) from None

    def constraint_part(self, name: str) -> Part:
        carrier = self.model.constraints[name].carrier
        for p in self.model.parts.values():
            if p.codomain is carrier:
                return p
        raise MereologyError(f"constraint {name} is not attached to a declared part")

    # evaluation

    def const(self, e, vars: Optional[Mapping] = None):
        """Value of ``e`` outside any system behavior (lets, grid bounds, arguments)."""
        vars = vars or {}
        self.check(e, set(vars))
        return self.eval(e, Scope(vars))

    def number(self, e, vars=None, what="value") -> Fraction:
        v = self.const(e, vars)
        if not isinstance(v, Fraction):
            raise elab_error(f"{what} must be a number, got {type_name(v)}", e.span)
        return v

    def natural(self, e, what="value") -> int:
        v = self.number(e, what=what)
        if v.denominator != 1 or v < 0:
            raise elab_error(f"{what} must be a natural number, got {render_label(v)}", e.span)
        return int(v)

    def eval(self, e, sc: Scope):
        if isinstance(e, ast.Num):
            return e.value
        if isinstance(e, (ast.BoolLit, ast.Str)):
            return e.value
        if isinstance(e, ast.Name):
            return self._lookup(e, sc)
        if isinstance(e, ast.ListLit):
            return tuple(self.eval(x, sc) for x in e.items)
        if isinstance(e, ast.Unary):
            v = self.eval(e.operand, sc)
            if e.op == "not":
                return not self._bool(v, e.operand)
            return -self._num(v, e.operand)
        if isinstance(e, ast.Binary):
            return self._binary(e, sc)
        if isinstance(e, ast.Abs):
            return abs(self._num(self.eval(e.arg, sc), e.arg))
        if isinstance(e, ast.Index):
            return self._index(e, sc)
        if isinstance(e, ast.Quantifier):
            return self._quantifier(e, sc)
        if isinstance(e, ast.Modal):
            return self._modal(e, sc)
        raise elab_error(f"{type(e).__name__} is not an expression", e.span)

    def _lookup(self, e: ast.Name, sc: Scope):
        if e.id in sc.bound:
            return sc.bound[e.id]
        if e.id in sc.vars:
            return sc.vars[e.id]
        if e.id in self.lets:
            return self.lets[e.id]
        if self.model is not None and e.id in self.model.constraints:
            if sc.s is None:
                raise elab_error(f"constraint {e.id} can only be used inside a constraint or query", e.span)
            bits = self.model.constraints[e.id].bits
            return bool(bits[self.constraint_part(e.id).map[sc.s]])
        raise elab_error(f"unknown name {e.id!r}", e.span)

    def _bool(self, v, node) -> bool:
        if not isinstance(v, bool):
            raise elab_error(f"expected a boolean, got {type_name(v)}", node.span)
        return v

    def _num(self, v, node) -> Fraction:
        if not isinstance(v, Fraction):
            raise elab_error(f"expected a number, got {type_name(v)}", node.span)
        return v

    def _binary(self, e: ast.Binary, sc: Scope):
        op = e.op
        if op in ("and", "or", "implies"):
            left = self._bool(self.eval(e.left, sc), e.left)
            if op == "and" and not left:
                return False
            if op == "or" and left:
                return True
            if op == "implies" and not left:
                return True
            return self._bool(self.eval(e.right, sc), e.right)
        a, b = self.eval(e.left, sc), self.eval(e.right, sc)
        if op in ("=", "!="):
            if type_name(a) != type_name(b):
                raise elab_error(f"cannot compare {type_name(a)} with {type_name(b)}", e.span)
            return (a == b) == (op == "=")
        a, b = self._num(a, e.left), self._num(b, e.right)
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "/":
            if b == 0:
                raise elab_error("division by zero", e.span)
            return a / b
        if op == "<":
            return a < b
        if op == "<=":
            return a <= b
        if op == ">":
            return a > b
        if op == ">=":
            return a >= b
        raise elab_error(f"unknown operator {op!r}", e.span)

    def _integer(self, v, node) -> int:
        v = self._num(v, node)
        if v.denominator != 1:
            raise elab_error(f"expected an integer, got {render_label(v)}", node.span)
        return int(v)

    def _index(self, e: ast.Index, sc: Scope):
        target = self.eval(e.target, sc)
        if not isinstance(target, tuple):
            raise elab_error(f"only series can be indexed, got {type_name(target)}", e.target.span)
        i = self._integer(self.eval(e.index, sc), e.index)
        if not 0 <= i < len(target):
            raise elab_error(f"index {i} outside 0..{len(target) - 1}", e.index.span)
        return target[i]

    def _quantifier(self, e: ast.Quantifier, sc: Scope):
        lo = self._integer(self.eval(e.lo, sc), e.lo)
        hi = self._integer(self.eval(e.hi, sc), e.hi)
        want = e.kind == "exists"
        for t in range(lo, hi + 1):
            inner = Scope(sc.vars, sc.s, {**sc.bound, e.var: Fraction(t)})
            if self._bool(self.eval(e.body, inner), e.body) == want:
                return want
        return not want

    def _modal(self, e: ast.Modal, sc: Scope):
        if sc.s is None:
            raise elab_error(f"{e.kind} can only be used inside a constraint or query", e.span)
        key = (id(e), tuple(sorted(sc.bound.items())))
        bits = self._modal_cache.get(key)
        if bits is None:
            bits = self.modal_bits(e.kind, e.source, e.target, e.arg, sc.bound)
            self._modal_cache[key] = bits
        return bool(bits[self.part(e.target).map[sc.s]])

    def modal_bits(self, kind, source: ast.Name, target: ast.Name, arg, bound=None) -> np.ndarray:
        p, q = self.part(source), self.part(target)
        phi = self.part_bits(arg, p, bound)
        op = _allows if kind == "allows" else _ensures
        return op(p, q, phi)

    def system_bits(self, e, bound: Optional[dict] = None) -> np.ndarray:
        """Truth value of boolean ``e`` at every system behavior."""
        bound = bound or {}
        self.check(e, self.variables, frozenset(bound))
        out = np.empty(len(self.envs), dtype=bool)
        for s, vars in enumerate(self.envs):
            out[s] = self._bool(self.eval(e, Scope(vars, s, bound)), e)
        return out

    def part_bits(self, e, part: Part, bound: Optional[dict] = None) -> np.ndarray:
        """``e`` as a constraint on ``part``; it must not vary within a fiber."""
        per_system = self.system_bits(e, bound)
        bits = np.zeros(len(part), dtype=bool)
        bits[part.map[per_system]] = True
        if (bits[part.map] != per_system).any():
            s = int(np.flatnonzero(bits[part.map] != per_system)[0])
            a = int(part.map[s])
            t = next(int(x) for x in part.fibers[a] if per_system[x] != per_system[s])
            labels = self.model.system.labels
            raise elab_error(
                f"expression is not a constraint on {part.name}: it differs between "
                f"{render_label(labels[s])} and {render_label(labels[t])}, "
                f"which {part.name} cannot tell apart",
                e.span,
            )
        return bits


class _Builder:
    def __init__(self, spec: ast.SpecAst):
        self.spec = spec
        self.system_decl: Optional[ast.SystemDecl] = None
        self.model: Optional[SystemModel] = None
        self.interp: Optional[Interpreter] = None

    def run(self) -> SystemModel:
        for d in self.spec.decls:
            if isinstance(d, ast.SystemDecl):
                self.system(d)
            elif isinstance(d, ast.PartDecl):
                self.declare_part(d)
            else:
                self.declare_constraint(d)
        return self.model

    # system

    def system(self, d: ast.SystemDecl):
        if self.system_decl is not None:
            raise elab_error("only one system may be declared per file", d.span)
        self.system_decl = d
        pre = Interpreter(lets={})
        for let in d.lets:
            if let.name in pre.lets:
                raise elab_error(f"{let.name} is already defined", let.span)
            pre.lets[let.name] = pre.const(let.expr)
        lets = pre.lets
        body = d.body
        if isinstance(body, ast.Generator):
            model = self.generate(body, pre)
            for k, v in model.params.items():
                if k in lets:
                    raise elab_error(f"let {k} clashes with a parameter of generator {body.name}", d.span)
                lets[k] = v
            model.params = lets
        else:
            if isinstance(body, ast.Explicit):
                labels = self.explicit(body, pre)
            elif isinstance(body, ast.Grid):
                labels = self.grid(body, pre)
            else:
                labels = self.simulate(body, pre)
            if not labels:
                raise elab_error(f"system {d.name} has no behaviors", body.span)
            system = BehaviorType(labels, id=d.name)
            model = SystemModel(system, models._with_bounds(system, {}), lets)
        model.meta.setdefault("notes", {})
        model.meta["system_name"] = d.name
        self.model = model
        self.interp = Interpreter(model, lets)
        clash = set(lets) & set(self.interp.variables)
        if clash:
            raise elab_error(f"let {sorted(clash)[0]} shadows a behavior variable", d.span)

    def explicit(self, body: ast.Explicit, pre: Interpreter) -> list:
        labels, seen, shape = [], set(), None
        for item in body.items:
            if isinstance(item, ast.Str):
                label, kind = item.value, "atom"
            else:
                names = [k for k, _ in item.fields]
                if len(set(names)) != len(names):
                    raise elab_error("duplicate field in behavior", item.span)
                label = tuple((k, pre.const(v)) for k, v in item.fields)
                kind = tuple(names)
            if shape is None:
                shape = kind
            elif kind != shape:
                raise elab_error("all behaviors must have the same fields", item.span)
            if label in seen:
                raise elab_error(f"duplicate behavior {render_label(label)}", item.span)
            seen.add(label)
            labels.append(label)
        return labels

    def grid(self, g: ast.Grid, pre: Interpreter) -> list:
        axes = []
        for b in g.bindings:
            if b.var in (name for name, _ in axes):
                raise elab_error(f"grid variable {b.var} bound twice", b.span)
            if b.var in pre.lets:
                raise elab_error(f"grid variable {b.var} shadows let {b.var}", b.span)
            if isinstance(b, ast.ListBinding):
                values = [pre.number(x, what="grid value") for x in b.values.items]
                if not values:
                    raise elab_error(f"grid variable {b.var} has no values", b.span)
                if len(set(values)) != len(values):
                    raise elab_error(f"grid values for {b.var} must be distinct", b.span)
            else:
                lo = pre.number(b.lo, what="grid bound")
                hi = pre.number(b.hi, what="grid bound")
                step = pre.number(b.step, what="grid step") if b.step is not None else Fraction(1)
                try:
                    values = models.GridAxis(b.var, lo, hi, step).values()
                except MereologyError as exc:
                    raise elab_error(str(exc), b.span) from None
            axes.append((b.var, values))
        names = [name for name, _ in axes]
        if g.where is not None:
            pre.check(g.where, set(names))
        out = []
        for values in itertools.product(*(v for _, v in axes)):
            point = tuple(zip(names, values))
            if g.where is not None:
                keep = pre.eval(g.where, Scope(dict(point)))
                if not pre._bool(keep, g.where):
                    continue
            out.append(point)
        return out

    def simulate(self, body: ast.Simulate, pre: Interpreter) -> list:
        init = self.grid(body.init, pre)
        state = [b.var for b in body.init.bindings]
        seen = set()
        for a in body.updates:
            if a.var not in state:
                raise elab_error(f"update of {a.var}, which is not a state variable", a.span)
            if a.var in seen:
                raise elab_error(f"{a.var} is updated twice", a.span)
            seen.add(a.var)
            pre.check(a.expr, set(state))
        missing = [v for v in state if v not in seen]
        if missing:
            raise elab_error(f"no update given for {missing[0]}", body.span)
        if body.horizon < 1:
            raise elab_error("horizon must be at least 1", body.span)
        order = {a.var: a for a in body.updates}
        out = []
        for point in init:
            current = dict(point)
            series = {v: [current[v]] for v in state}
            for _ in range(body.horizon):
                nxt = {}
                for v in state:
                    a = order[v]
                    nxt[v] = pre._num(pre.eval(a.expr, Scope(current)), a.expr)
                current = nxt
                for v in state:
                    series[v].append(current[v])
            out.append(tuple((v, tuple(series[v])) for v in state))
        return out

    def generate(self, g: ast.Generator, pre: Interpreter) -> SystemModel:
        if g.name not in _GENERATORS:
            raise elab_error(f"unknown generator {g.name!r}; known: {', '.join(_GENERATORS)}", g.span)
        allowed = _GENERATORS[g.name]
        args = {}
        for a in g.args:
            if a.name not in allowed:
                raise elab_error(f"{g.name} takes no argument {a.name!r}; known: {', '.join(allowed)}", a.span)
            if a.name in args:
                raise elab_error(f"argument {a.name} given twice", a.span)
            args[a.name] = a
        try:
            if g.name == "bicycle":
                kw = {"r": pre.number(args["r"].value, what="r")} if "r" in args else {}
                return models.build_bicycle(**kw)
            if g.name == "water":
                kw = {}
                for key, param in (("k", "k"), ("R", "big_r")):
                    if key in args:
                        kw[param] = pre.number(args[key].value, what=key)
                if "temps" in args:
                    kw["init_temps"] = self._numbers(args["temps"], pre)
                if "horizon" in args:
                    kw["horizon"] = pre.natural(args["horizon"].value, "horizon")
                if "windows" in args:
                    kw["windows"] = [self._ints(w, pre) for w in self._items(args["windows"])]
                return models.build_water(**kw)
            if g.name == "ecosystem":
                kw = {k: pre.number(args[k].value, what=k) for k in ("d_f", "b_r", "c_f", "c_r") if k in args}
                if "horizon" in args:
                    kw["horizon"] = pre.natural(args["horizon"].value, "horizon")
                if "deadlines" in args:
                    kw["deadlines"] = self._ints(args["deadlines"].value, pre)
                return models.build_ecosystem(**kw)
            for key in ("seed", "size", "parts"):
                if key not in args:
                    raise elab_error(f"random needs argument {key}", g.span)
            return models.random_system(
                pre.natural(args["seed"].value, "seed"),
                pre.natural(args["size"].value, "size"),
                pre.natural(args["parts"].value, "parts"),
            )
        except MereologyError as exc:
            raise elab_error(str(exc), g.span) from None

    def _items(self, arg: ast.Arg):
        if not isinstance(arg.value, ast.ListLit):
            raise elab_error(f"{arg.name} must be a list", arg.value.span)
        return arg.value.items

    def _numbers(self, arg: ast.Arg, pre) -> list:
        return [pre.number(x, what=arg.name) for x in self._items(arg)]

    def _ints(self, e, pre) -> list:
        if not isinstance(e, ast.ListLit):
            raise elab_error("expected a list of time indices", e.span)
        return [pre.natural(x, "time index") for x in e.items]

    # parts and constraints

    def _need_system(self, name: ast.Name):
        if self.model is None or name.id != self.system_decl.name:
            raise elab_error(f"unknown system {name.id!r}", name.span)

    def _fresh(self, name: str, span):
        m = self.model
        if name in m.parts or name in m.constraints or name in m.params or name in self.interp.variables:
            raise elab_error(f"{name} is already defined", span)

    def declare_part(self, d: ast.PartDecl):
        self._need_system(d.system)
        self._fresh(d.name, d.span)
        system = self.model.system
        e = d.expr
        if isinstance(e, ast.Project):
            for v in e.vars:
                if v not in self.interp.variables or v == "self":
                    raise elab_error(f"unknown behavior variable {v!r}", e.span)
            part = models.project(system, e.vars, d.name)
        elif isinstance(e, ast.By):
            self.interp.check(e.expr, self.interp.variables)
            observed = {
                label: self.interp.eval(e.expr, Scope(vars, s))
                for s, (label, vars) in enumerate(zip(system.labels, self.interp.envs))
            }
            part = core.part_from_observation(system, observed.__getitem__, name=d.name)
        else:
            left, right = self.interp.part(e.left), self.interp.part(e.right)
            combined = core.join(left, right) if e.op == "join" else core.meet(left, right)
            part = Part(system, BehaviorType(combined.codomain.labels, id=d.name), combined.map, name=d.name)
        self.model.parts[d.name] = part

    def declare_constraint(self, d: ast.ConstraintDecl):
        if self.model is None:
            raise elab_error(f"unknown part {d.part.id!r}", d.part.span)
        part = self.interp.part(d.part)
        self._fresh(d.name, d.span)
        bits = self.interp.part_bits(d.expr, part)
        self.model.constraints[d.name] = Constraint(part.codomain, bits)
        if _has_quantifier(d.expr):
            self.model.meta["notes"][d.name] = FINITE_HORIZON_NOTE


def elaborate(spec: ast.SpecAst) -> tuple[SystemModel, list[ast.Query]]:
    """Materialize the declared system, parts and constraints.

    Raises ``ElaborationError`` with the span of the offending node.
    """
    model = _Builder(spec).run()
    if model is None:
        first = spec.decls[0]
        raise elab_error("a system must be declared before parts and constraints", first.span)
    return model, list(spec.queries)
