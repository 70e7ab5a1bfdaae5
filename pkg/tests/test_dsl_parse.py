from fractions import Fraction as F

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from mereology.dsl import DslError, ParseError, parse, parse_expr, parse_query, pretty
from mereology.dsl import syntax as ast
from mereology.dsl.lexer import KEYWORDS, tokenize
from mereology.dsl.printer import expr as print_expr
from mereology.dsl.printer import query as print_query

from .conftest import EXAMPLES, SPECS


def kinds(text):
    return [t.kind for t in tokenize(text)]


# --- lexer --------------------------------------------------------------------


def test_ranges_lex_apart_from_decimals():
    assert kinds("1..5") == ["NUMBER", "..", "NUMBER", "EOF"]
    assert [t.text for t in tokenize("0.5 .. 2.25")][:3] == ["0.5", "..", "2.25"]


def test_unicode_aliases():
    assert kinds("a ≤ b ≥ c ≠ d − e × f → g") == [
        "IDENT", "<=", "IDENT", ">=", "IDENT", "!=", "IDENT", "-", "IDENT", "*", "IDENT", "->", "IDENT", "EOF"
    ]


def test_comments_strings_and_keywords():
    toks = tokenize('# note\nsystem "a \\"b\\"" query')
    assert [t.kind for t in toks] == ["system", "STRING", "query", "EOF"]
    assert toks[1].text == 'a "b"'
    assert kinds("Forall forall") == ["IDENT", "forall", "EOF"]


def test_spans_count_bytes_and_characters():
    toks = tokenize("≤ x")
    x = toks[1]
    assert (x.span.line, x.span.column) == (1, 3)
    assert x.span.start == len("≤ ".encode())


def test_lexer_errors():
    with pytest.raises(ParseError, match="malformed number"):
        tokenize("12abc")
    with pytest.raises(ParseError, match="unexpected character"):
        tokenize("a ? b")


# --- parser -------------------------------------------------------------------


def test_precedence():
    e = parse_expr("not a = b and c or d implies e implies f")
    assert e == parse_expr("(((not (a = b)) and c) or d) implies (e implies f)")
    assert parse_expr("1 + 2 * 3 - 4") == parse_expr("(1 + (2 * 3)) - 4")
    assert parse_expr("-x[0] * 2") == parse_expr("(-(x[0])) * 2")


def test_numbers_are_exact():
    assert parse_expr("0.1") == ast.Num(F(1, 10))
    assert parse_expr("1/3") == ast.Binary("/", ast.Num(F(1)), ast.Num(F(3)))


def test_quantifier_body_extends_right():
    e = parse_expr("forall t in 0 .. 3: x[t] > 0 and y")
    assert isinstance(e, ast.Quantifier)
    assert isinstance(e.body, ast.Binary) and e.body.op == "and"


def test_query_forms():
    q = parse_query("compatible(P.(x = 1), Q.a) expect true")
    assert isinstance(q.body, ast.RelationQuery)
    assert q.body.right.expr == ast.Name("a")
    assert parse_query("query laws").body == ast.LawsQuery()
    e = parse_query("entails(x > 1, x > 0) on P")
    assert e.body.on == ast.Name("P")
    m = parse_query("allows(P -> Q, x = 1) expect y = 2")
    assert (m.body.source.id, m.body.target.id) == ("P", "Q")


def test_empty_input():
    with pytest.raises(ParseError) as exc:
        parse("")
    d = exc.value.diagnostic
    assert "expected declaration" in d.message
    assert (d.span.line, d.span.column) == (1, 1)


def test_unbalanced_brace_points_at_offender():
    with pytest.raises(ParseError) as exc:
        parse("system S { behaviors: [a, b]\n\npart P of S = by(1)\n")
    assert (exc.value.diagnostic.span.line, exc.value.diagnostic.span.column) == (3, 1)


def test_let_and_generator_syntax():
    spec = parse("system S {\n let k = 2\n behaviors: generator water(k = k, temps = [0, 10])\n}\n")
    decl = spec.decls[0]
    assert decl.lets[0].name == "k"
    assert isinstance(decl.body, ast.Generator) and [a.name for a in decl.body.args] == ["k", "temps"]


@pytest.mark.parametrize("name", EXAMPLES)
def test_bundled_specs_round_trip(name):
    tree = parse((SPECS / f"{name}.msys").read_text())
    assert parse(pretty(tree)) == tree
    assert pretty(parse(pretty(tree))) == pretty(tree)


def test_spans_nest(name="ecosystem"):
    tree = parse((SPECS / f"{name}.msys").read_text())
    for node in ast.walk(tree):
        for child in ast.children(node):
            if node.span is not None and child.span is not None:
                assert node.span.start <= child.span.start <= child.span.end <= node.span.end


# --- generated round trips and totality ----------------------------------------

names = st.sampled_from(["x", "y", "T", "f_1", "Wheel"])
numbers = st.builds(lambda n, d: ast.Num(F(n, d)), st.integers(0, 500), st.sampled_from([1, 2, 4, 5, 10, 8]))
atoms = st.one_of(numbers, st.builds(ast.Name, names), st.builds(ast.BoolLit, st.booleans()))


def _compound(children):
    return st.one_of(
        st.builds(ast.Unary, st.sampled_from(["-", "not"]), children),
        st.builds(
            ast.Binary,
            st.sampled_from(["+", "-", "*", "/", "=", "!=", "<", "<=", ">", ">=", "and", "or", "implies"]),
            children,
            children,
        ),
        st.builds(ast.Abs, children),
        st.builds(ast.Index, children, children),
        st.builds(ast.Quantifier, st.sampled_from(["forall", "exists"]), names, children, children, children),
        st.builds(ast.Modal, st.sampled_from(["allows", "ensures"]), st.builds(ast.Name, names), st.builds(ast.Name, names), children),
        st.builds(lambda xs: ast.ListLit(tuple(xs)), st.lists(children, max_size=3)),
    )


def _chainless(e) -> bool:
    # the grammar rejects a comparison directly under another comparison
    comparisons = {"=", "!=", "<", "<=", ">", ">="}
    for node in ast.walk(e):
        if isinstance(node, ast.Binary) and node.op in comparisons:
            for side in (node.left, node.right):
                if isinstance(side, ast.Binary) and side.op in comparisons:
                    return False
    return True


exprs = st.recursive(atoms, _compound, max_leaves=12).filter(_chainless)


@settings(max_examples=400, deadline=None, suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow])
@given(exprs)
def test_printed_expressions_reparse(e):
    assert parse_expr(print_expr(e)) == e


@settings(max_examples=200, deadline=None)
@given(exprs, exprs)
def test_printed_queries_reparse(a, b):
    q = ast.Query(ast.EntailsQuery(a, b, ast.Name("P")), a)
    assert parse_query(print_query(q)) == q


fragments = st.sampled_from(
    sorted(KEYWORDS) + ["{", "}", "(", ")", "[", "]", ",", ":", ":=", "..", "->", "=", "<", "+", "*", "/", ".",
                         "x", "P", "1", "0.5", '"s"', "\n", " ", "#c\n", "≤", "?", "1.2.3", '"open']
)


@settings(max_examples=500, deadline=None)
@given(st.one_of(st.text(max_size=60), st.lists(fragments, max_size=30).map(" ".join)))
def test_parsing_is_total(text):
    try:
        parse(text)
    except DslError as exc:
        span = exc.diagnostic.span
        lines = text.split("\n")
        assert 0 <= span.start <= span.end <= len(text.encode())
        assert 1 <= span.line <= len(lines)
        assert 1 <= span.column <= len(lines[span.line - 1]) + 1
