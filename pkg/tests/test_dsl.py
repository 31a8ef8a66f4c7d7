import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netgen import random_netlist
from tmrvoter.dsl import ParseError, parse, serialize, tokenize
from tmrvoter.netlist import And, Gate, GateKind, Netlist, Not, Or, Var, Xor
from tmrvoter.voters import VOTER_NAMES, builtin

CLASSICAL = """\
# classical majority voter
voter "classical" {
  inputs X, Y, Z;
  node N1 = AND(X, Y);   # first level
  node N2 = and(Y, Z);
  node N3 = AND(X, Z);
  OUTPUT V = OR(N1, N2, N3);
}
"""


def _wrap(body, inputs="X, Y, Z"):
    return f'voter "t" {{\ninputs {inputs};\n{body}\n}}\n'


def test_parse_classical_equals_builtin():
    assert parse(CLASSICAL) == builtin("classical")


def test_serialize_bn_exact():
    assert serialize(builtin("bn")) == (
        'voter "bn" {\n'
        "inputs X, Y, Z;\n"
        "node N = XOR(X, Y);\n"
        "output V = MUX(N; Y, Z);\n"
        "}\n"
    )


def test_serialize_proposed_sop():
    assert "output V = EXPR(M & Z | X & Y | Y & Z);" in serialize(builtin("proposed"))


@pytest.mark.parametrize("name", VOTER_NAMES)
def test_round_trip_builtins(name):
    n = builtin(name)
    assert parse(serialize(n)) == n


def test_self_use_before_definition():
    with pytest.raises(ParseError) as ei:
        parse(_wrap("node A = AND(A, X);\noutput V = INV(A);"))
    e = ei.value
    assert e.kind in ("forward-reference", "undefined-net")
    assert (e.line, e.column) == (3, 14)


def test_arity_error():
    with pytest.raises(ParseError) as ei:
        parse(_wrap("node N1 = INV(X);\nnode P = AND(N1);\noutput V = INV(P);"))
    assert ei.value.kind == "arity"
    assert "AND requires 2..8 inputs" in ei.value.message
    assert (ei.value.line, ei.value.column) == (4, 10)


@pytest.mark.parametrize("body, kind", [
    ("node N = AND(X, Q);\noutput V = INV(N);", "undefined-net"),
    ("node N = AND(X, M);\nnode M = INV(X);\noutput V = OR(N, M);", "forward-reference"),
    ("node N = INV(X);\nnode N = INV(Y);\noutput V = INV(N);", "duplicate-net"),
    ("node X = INV(Y);\noutput V = INV(X);", "duplicate-net"),
    ("node N = INV(X);", "no-output"),
    ("output V = INV(X);\noutput W = INV(X);", "multiple-output"),
    ("output V = INV(X);\nnode W = INV(X);", "syntax"),
    ("node N = FOO(X);\noutput V = INV(N);", "syntax"),
    ("node N = AND(X Y);\noutput V = INV(N);", "syntax"),
    ("node N = EXPR(X & );\noutput V = INV(N);", "syntax"),
    ("node N = MUX(X, Y, Z);\noutput V = INV(N);", "syntax"),
    ("node N = INV(X) $\noutput V = INV(N);", "syntax"),
])
def test_error_kinds(body, kind):
    with pytest.raises(ParseError) as ei:
        parse(_wrap(body))
    assert ei.value.kind == kind


def test_duplicate_input():
    with pytest.raises(ParseError) as ei:
        parse(_wrap("output V = INV(X);", inputs="X, Y, X"))
    assert ei.value.kind == "duplicate-net"
    assert (ei.value.line, ei.value.column) == (2, 14)


@pytest.mark.parametrize("text", ["", "voter", 'voter "x" {', 'voter "x" { inputs X; output V = INV(X); } extra',
                                  'voter "unterminated { }'])
def test_syntax_errors(text):
    with pytest.raises(ParseError) as ei:
        parse(text)
    assert ei.value.kind == "syntax"


def test_keywords_case_insensitive_identifiers_not():
    n = parse('VOTER "c" { INPUTS x, X; Node v = Xor(x, X); output V = not(v); }')
    assert n.primary_inputs == ("x", "X")
    assert n.internal_nodes == ("v",)


def test_expression_precedence():
    n = parse(_wrap("output V = EXPR(~X & Y ^ Z | X);"))
    assert n.gates[0].expr == Or((Xor((And((Not(Var("X")), Var("Y"))), Var("Z"))), Var("X")))


def test_nested_same_operator_keeps_shape():
    e = And((And((Var("X"), Var("Y"))), Var("Z")))
    n = Netlist("t", ("X", "Y", "Z"), (Gate.expression("V", e),), "V")
    text = serialize(n)
    assert "EXPR((X & Y) & Z)" in text
    assert parse(text) == n


def test_not_over_compound():
    e = Not(Or((Var("X"), Not(Not(Var("Y"))))))
    n = Netlist("t", ("X", "Y"), (Gate.expression("V", e),), "V")
    assert "EXPR(~(X | ~~Y))" in serialize(n)
    assert parse(serialize(n)) == n


def test_mux2_alias_and_not_alias():
    n = parse(_wrap("node N = NOT(X);\noutput V = mux2(N; Y, Z);"))
    assert n.gates[0].kind is GateKind.INV
    assert n.gates[1].kind is GateKind.MUX2


def test_parse_deterministic():
    assert parse(CLASSICAL) == parse(CLASSICAL)


def _position_is_real(text, e):
    lines = text.split("\n")
    if not 1 <= e.line <= len(lines):
        return False
    return 1 <= e.column <= len(lines[e.line - 1]) + 1


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=10**9))
def test_round_trip_random(seed):
    n = random_netlist(random.Random(seed))
    assert parse(serialize(n)) == n


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=10**9), st.data())
def test_error_positions_are_real(seed, data):
    # Corrupt a valid file by deleting or replacing one character.
    text = serialize(random_netlist(random.Random(seed)))
    i = data.draw(st.integers(min_value=0, max_value=len(text) - 1))
    ch = data.draw(st.sampled_from(["", ";", "(", "Q", "$", "\n", ","]))
    bad = text[:i] + ch + text[i + 1:]
    try:
        parse(bad)
    except ParseError as e:
        assert _position_is_real(bad, e), (bad, e)


def test_tokenize_positions():
    toks = tokenize("a\n  bc(")
    assert [(t.text, t.line, t.column) for t in toks] == [("a", 1, 1), ("bc", 2, 3), ("(", 2, 5), ("", 2, 6)]
