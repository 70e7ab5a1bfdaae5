"""Recursive-descent parser producing ``syntax`` trees.

Parsing stops at the first error; the raised ``ParseError`` carries the
offending token's span and the set of tokens that would have been accepted.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from . import syntax as ast
from .diagnostics import ParseError, SourceSpan, parse_error
from .lexer import KEYWORDS, Token, tokenize

COMPARISONS = {"=": "=", "==": "=", "!=": "!=", "<": "<", "<=": "<=", ">": ">", ">=": ">="}
QUERY_KINDS = ("allows", "ensures", "compatible", "determines", "entails", "leq", "meet", "join", "laws")
BODY_KINDS = ("[", "grid", "simulate", "generator")
PRIMARY_START = ("NUMBER", "STRING", "IDENT", "true", "false", "(", "[", "abs", "forall", "exists", "allows", "ensures")
EXPR_START = ("not", "-") + PRIMARY_START


class Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    # token plumbing

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    @property
    def prev(self) -> Token:
        return self.tokens[self.i - 1]

    def at(self, *kinds) -> bool:
        return self.tok.kind in kinds

    def accept(self, kind) -> Optional[Token]:
        if self.tok.kind == kind:
            self.i += 1
            return self.tokens[self.i - 1]
        return None

    def expect(self, kind, *also, what: Optional[str] = None) -> Token:
        """Consume a ``kind`` token; ``also`` only widens the reported expected set."""
        if self.tok.kind == kind:
            self.i += 1
            return self.prev
        raise self.error((kind,) + also, what)

    def error(self, expected, what: Optional[str] = None) -> ParseError:
        names = tuple(_display(k) for k in expected)
        message = f"expected {what}" if what else "unexpected " + self.tok.describe()
        if what:
            message += ", found " + self.tok.describe()
        return parse_error(message, self.tok.span, names)

    def since(self, start: SourceSpan) -> SourceSpan:
        return start.cover(self.prev.span)

    def ident(self, what: str = "identifier") -> Token:
        return self.expect("IDENT", what=what)

    def name(self, what: str = "identifier") -> ast.Name:
        t = self.ident(what)
        return ast.Name(t.text, t.span)

    # top level

    def spec(self) -> ast.SpecAst:
        start = self.tok.span
        decls = []
        while self.at("system", "part", "constraint"):
            decls.append(self.decl())
        if not decls:
            raise self.error(("system", "part", "constraint"), "declaration")
        queries = []
        while self.at("query"):
            queries.append(self.query())
        if not self.at("EOF"):
            if self.at("system", "part", "constraint"):
                raise parse_error("declarations must precede queries", self.tok.span, (_display("query"), _display("EOF")))
            raise self.error(("query", "EOF"), "query or end of input")
        return ast.SpecAst(tuple(decls), tuple(queries), start.cover(self.tok.span))

    def decl(self):
        start = self.tok.span
        if self.accept("system"):
            name = self.ident("system name").text
            self.expect("{")
            lets = []
            while self.at("let"):
                lets.append(self.let())
            self.expect("behaviors", "let", what="'behaviors' or 'let'")
            self.expect(":")
            body = self.body()
            self.expect("}", what="'}' closing the system body")
            return ast.SystemDecl(name, tuple(lets), body, self.since(start))
        if self.accept("part"):
            name = self.ident("part name").text
            self.expect("of")
            system = self.name("system name")
            self.expect("=")
            return ast.PartDecl(name, system, self.part_expr(), self.since(start))
        self.expect("constraint")
        name = self.ident("constraint name").text
        self.expect("on")
        part = self.name("part name")
        self.expect("=")
        return ast.ConstraintDecl(name, part, self.expr(), self.since(start))

    def let(self) -> ast.Let:
        start = self.expect("let").span
        name = self.ident().text
        self.expect("=")
        return ast.Let(name, self.expr(), self.since(start))

    def body(self):
        if self.at("["):
            return self.explicit()
        if self.at("grid"):
            return self.grid()
        if self.at("simulate"):
            return self.simulate()
        if self.at("generator"):
            return self.generator()
        raise self.error(BODY_KINDS, "behavior list, grid, simulate or generator")

    def explicit(self) -> ast.Explicit:
        start = self.expect("[").span
        items = [self.explicit_item()]
        while self.accept(","):
            items.append(self.explicit_item())
        self.expect("]", ",")
        return ast.Explicit(tuple(items), self.since(start))

    def explicit_item(self):
        t = self.tok
        if self.accept("IDENT") or self.accept("STRING"):
            return ast.Str(t.text, t.span)
        if self.accept("{"):
            fields = [self.record_field()]
            while self.accept(","):
                fields.append(self.record_field())
            self.expect("}", ",")
            return ast.Record(tuple(fields), self.since(t.span))
        raise self.error(("IDENT", "STRING", "{"), "behavior")

    def record_field(self):
        name = self.ident("field name").text
        self.expect("=")
        return (name, self.expr())

    def grid(self) -> ast.Grid:
        start = self.expect("grid").span
        bindings = [self.binding()]
        while self.accept(","):
            bindings.append(self.binding())
        where = self.expr() if self.accept("where") else None
        return ast.Grid(tuple(bindings), where, self.since(start))

    def binding(self):
        var = self.ident("grid variable")
        self.expect("in")
        if self.at("["):
            return ast.ListBinding(var.text, self.list_lit(), self.since(var.span))
        lo = self.additive()
        self.expect("..")
        hi = self.additive()
        step = self.additive() if self.accept("step") else None
        return ast.RangeBinding(var.text, lo, hi, step, self.since(var.span))

    def simulate(self) -> ast.Simulate:
        start = self.expect("simulate").span
        self.expect("init")
        init = self.grid()
        self.expect("update", what="'update'")
        updates = [self.assign()]
        while True:
            self.accept(",")
            if not self.at("IDENT"):
                break
            updates.append(self.assign())
        self.expect("horizon", what="another update or 'horizon'")
        horizon = self.natural()
        return ast.Simulate(init, tuple(updates), horizon, self.since(start))

    def assign(self) -> ast.Assign:
        var = self.ident("state variable")
        self.expect(":=")
        return ast.Assign(var.text, self.expr(), self.since(var.span))

    def natural(self) -> int:
        t = self.expect("NUMBER", what="natural number")
        if not t.text.isdigit():
            raise parse_error(f"expected natural number, found {t.describe()}", t.span)
        return int(t.text)

    def generator(self) -> ast.Generator:
        start = self.expect("generator").span
        name = self.ident("generator name").text
        self.expect("(")
        args = []
        if not self.at(")"):
            args.append(self.arg())
            while self.accept(","):
                args.append(self.arg())
        self.expect(")", ",")
        return ast.Generator(name, tuple(args), self.since(start))

    def arg(self) -> ast.Arg:
        # generator parameters may share a name with a keyword, e.g. horizon
        if self.tok.kind in KEYWORDS and self.tokens[self.i + 1].kind == "=":
            name = self.tok
            self.i += 1
        else:
            name = self.ident("argument name")
        self.expect("=")
        return ast.Arg(name.text, self.expr(), self.since(name.span))

    def part_expr(self):
        start = self.tok.span
        if self.accept("project"):
            self.expect("(")
            names = [self.ident("variable").text]
            while True:
                self.accept(",")
                if not self.at("IDENT"):
                    break
                names.append(self.ident().text)
            self.expect(")", "IDENT")
            return ast.Project(tuple(names), self.since(start))
        if self.accept("by"):
            self.expect("(")
            e = self.expr()
            self.expect(")")
            return ast.By(e, self.since(start))
        if self.at("join", "meet"):
            op = self.tok.kind
            self.i += 1
            self.expect("(")
            left = self.name("part name")
            self.expect(",")
            right = self.name("part name")
            self.expect(")")
            return ast.Combine(op, left, right, self.since(start))
        raise self.error(("project", "by", "join", "meet"), "part expression")

    # queries

    def query(self) -> ast.Query:
        start = self.expect("query").span
        body = self.query_body()
        expect = self.expr() if self.accept("expect") else None
        return ast.Query(body, expect, self.since(start))

    def query_body(self):
        start = self.tok.span
        kind = self.tok.kind
        if kind not in QUERY_KINDS:
            raise self.error(QUERY_KINDS, "query kind")
        self.i += 1
        if kind == "laws":
            return ast.LawsQuery(start)
        self.expect("(")
        if kind in ("allows", "ensures"):
            source, target, arg = self.modal_args()
            return ast.ModalQuery(kind, source, target, arg, self.since(start))
        if kind in ("compatible", "determines"):
            left = self.designator()
            self.expect(",")
            right = self.designator()
            self.expect(")")
            return ast.RelationQuery(kind, left, right, self.since(start))
        if kind == "entails":
            lhs = self.expr()
            self.expect(",")
            rhs = self.expr()
            self.expect(")")
            on = self.name("part name") if self.accept("on") else None
            return ast.EntailsQuery(lhs, rhs, on, self.since(start))
        left = self.name("part name")
        self.expect(",")
        right = self.name("part name")
        self.expect(")")
        return ast.PartQuery(kind, left, right, self.since(start))

    def modal_args(self):
        # after "(": P -> Q , expr )
        source = self.name("part name")
        self.expect("->")
        target = self.name("part name")
        self.expect(",")
        arg = self.expr()
        self.expect(")")
        return source, target, arg

    def designator(self) -> ast.Designator:
        part = self.name("part name")
        self.expect(".")
        if self.accept("("):
            e = self.expr()
            self.expect(")")
        else:
            e = self.name("constraint name or '('")
        return ast.Designator(part, e, self.since(part.span))

    # expressions, loosest binding first

    def expr(self):
        return self.implication()

    def implication(self):
        left = self.disjunction()
        if self.accept("implies"):
            right = self.implication()
            return ast.Binary("implies", left, right, left.span.cover(right.span))
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.accept("or"):
            right = self.conjunction()
            left = ast.Binary("or", left, right, left.span.cover(right.span))
        return left

    def conjunction(self):
        left = self.negation()
        while self.accept("and"):
            right = self.negation()
            left = ast.Binary("and", left, right, left.span.cover(right.span))
        return left

    def negation(self):
        if self.at("not"):
            start = self.tok.span
            self.i += 1
            operand = self.negation()
            return ast.Unary("not", operand, start.cover(operand.span))
        return self.comparison()

    def comparison(self):
        left = self.additive()
        if self.tok.kind in COMPARISONS:
            op = COMPARISONS[self.tok.kind]
            self.i += 1
            right = self.additive()
            if self.tok.kind in COMPARISONS:
                raise parse_error("comparisons do not chain; use 'and'", self.tok.span, (_display("and"),))
            return ast.Binary(op, left, right, left.span.cover(right.span))
        return left

    def additive(self):
        left = self.multiplicative()
        while self.at("+", "-"):
            op = self.tok.kind
            self.i += 1
            right = self.multiplicative()
            left = ast.Binary(op, left, right, left.span.cover(right.span))
        return left

    def multiplicative(self):
        left = self.unary()
        while self.at("*", "/"):
            op = self.tok.kind
            self.i += 1
            right = self.unary()
            left = ast.Binary(op, left, right, left.span.cover(right.span))
        return left

    def unary(self):
        if self.at("-"):
            start = self.tok.span
            self.i += 1
            operand = self.unary()
            return ast.Unary("-", operand, start.cover(operand.span))
        return self.postfix()

    def postfix(self):
        e = self.primary()
        while self.accept("["):
            index = self.expr()
            self.expect("]")
            e = ast.Index(e, index, self.since(e.span))
        return e

    def primary(self):
        t = self.tok
        if self.accept("NUMBER"):
            return ast.Num(Fraction(t.text), t.span)
        if self.accept("STRING"):
            return ast.Str(t.text, t.span)
        if self.accept("true") or self.accept("false"):
            return ast.BoolLit(t.kind == "true", t.span)
        if self.accept("IDENT"):
            return ast.Name(t.text, t.span)
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        if self.at("["):
            return self.list_lit()
        if self.accept("abs"):
            self.expect("(")
            e = self.expr()
            self.expect(")")
            return ast.Abs(e, self.since(t.span))
        if self.accept("forall") or self.accept("exists"):
            var = self.ident("bound variable").text
            self.expect("in")
            lo = self.additive()
            self.expect("..")
            hi = self.additive()
            self.expect(":")
            body = self.expr()
            return ast.Quantifier(t.kind, var, lo, hi, body, self.since(t.span))
        if self.accept("allows") or self.accept("ensures"):
            self.expect("(")
            source, target, arg = self.modal_args()
            return ast.Modal(t.kind, source, target, arg, self.since(t.span))
        raise self.error(EXPR_START, "expression")

    def list_lit(self) -> ast.ListLit:
        start = self.expect("[").span
        items = []
        if not self.at("]"):
            items.append(self.expr())
            while self.accept(","):
                items.append(self.expr())
        self.expect("]", ",")
        return ast.ListLit(tuple(items), self.since(start))


def _display(kind: str) -> str:
    if kind == "EOF":
        return "end of input"
    if kind in ("IDENT", "NUMBER", "STRING"):
        return kind.lower()
    return f"'{kind}'"


def parse(text: str) -> ast.SpecAst:
    """Parse a whole ``.msys`` source. Raises ``ParseError`` on the first error."""
    return Parser(text).spec()


def parse_query(text: str) -> ast.Query:
    """Parse one query, with or without the leading ``query`` keyword."""
    p = Parser(text)
    if p.at("query"):
        q = p.query()
    else:
        start = p.tok.span
        body = p.query_body()
        expect = p.expr() if p.accept("expect") else None
        q = ast.Query(body, expect, p.since(start))
    p.expect("EOF", what="end of query")
    return q


def parse_expr(text: str):
    p = Parser(text)
    e = p.expr()
    p.expect("EOF", what="end of expression")
    return e
