"""Malformed specs with the diagnostic each must produce.

Fields: name, source, line, column, message fragment, phase.
"""

GRID = "system S { behaviors: grid x in 0..3 }\n"

CASES = [
    ("empty", "", 1, 1, "expected declaration, found end of input", "parse"),
    (
        "unclosed_brace",
        "system S { behaviors: grid x in 0..3\npart P of S = project(x)\n",
        2, 1, "expected '}' closing the system body, found 'part'", "parse",
    ),
    ("unclosed_paren", GRID + "part P of S = project(x\n", 3, 1, "unexpected end of input", "parse"),
    ("bad_character", GRID + "constraint c on Top = x $ 2\n", 2, 25, "unexpected character '$'", "parse"),
    ("unterminated_string", GRID + 'constraint c on Top = x = "abc\n', 2, 27, "unterminated string", "parse"),
    ("chained_comparison", GRID + "constraint c on Top = 1 < x < 3\n", 2, 29, "comparisons do not chain", "parse"),
    ("declaration_after_query", GRID + "query laws\npart P of S = project(x)\n", 3, 1, "declarations must precede queries", "parse"),
    ("unknown_query_kind", GRID + "query frobnicate(Top)\n", 2, 7, "expected query kind, found ident 'frobnicate'", "parse"),
    (
        "fractional_horizon",
        "system S { behaviors: simulate init grid x in 0..1 update x := x horizon 1.5 }\n",
        1, 74, "expected natural number, found number '1.5'", "parse",
    ),
    ("bad_part_expression", GRID + "part P of S = bogus(x)\n", 2, 15, "expected part expression", "parse"),
    ("missing_operand", GRID + "constraint c on Top = x +\n", 3, 1, "expected expression, found end of input", "parse"),
    ("unknown_system", GRID + "part P of T = project(x)\n", 2, 11, "unknown system 'T'", "elaborate"),
    ("unknown_part", GRID + "constraint c on Nope = x > 1\n", 2, 17, "unknown part 'Nope'", "elaborate"),
    ("unknown_name", GRID + "constraint c on Top = y > 1\n", 2, 23, "unknown name 'y'", "elaborate"),
    ("type_error", GRID + "constraint c on Top = x + true\n", 2, 27, "expected a number, got boolean", "elaborate"),
    (
        "not_a_constraint_on_part",
        "system S { behaviors: grid x in 0..3, y in 0..1 }\npart P of S = project(x)\nconstraint c on P = y = 1\n",
        3, 21, "expression is not a constraint on P", "elaborate",
    ),
    ("two_systems", GRID + "system T { behaviors: [a] }\n", 2, 1, "only one system may be declared per file", "elaborate"),
    ("empty_grid", "system S { behaviors: grid x in 0..3 where x > 5 }\n", 1, 23, "system S has no behaviors", "elaborate"),
    ("division_by_zero", GRID + "constraint c on Top = x / (x - x) > 0\n", 2, 23, "division by zero", "elaborate"),
    (
        "bad_generator_argument",
        "system S { behaviors: generator bicycle(q = 2) }\n",
        1, 41, "bicycle takes no argument 'q'", "elaborate",
    ),
]
