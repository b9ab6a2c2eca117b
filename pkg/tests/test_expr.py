from fractions import Fraction

import pytest

from galilean import expr as ex
from galilean.errors import CycleError, ParseError

P = ex.parse_expression


def test_precedence_and_associativity():
    assert P("a + b*c") == ex.BinaryOp("+", ex.Symbol("a"), P("b*c"))
    assert P("a - b - c") == ex.BinaryOp("-", P("a - b"), ex.Symbol("c"))
    assert P("a/b/c") == ex.BinaryOp("/", P("a/b"), ex.Symbol("c"))
    # right associative power
    assert P("a^b^c") == ex.BinaryOp("^", ex.Symbol("a"), P("b^c"))


def test_unary_minus_binding():
    # looser than ^, tighter than * and /
    assert P("-a^2") == ex.Negate(P("a^2"))
    assert P("-a*b") == ex.BinaryOp("*", ex.Negate(ex.Symbol("a")), ex.Symbol("b"))
    assert P("a*-b") == ex.BinaryOp("*", ex.Symbol("a"), ex.Negate(ex.Symbol("b")))
    assert P("2^-y") == ex.BinaryOp("^", ex.Number(2), ex.Negate(ex.Symbol("y")))


def test_numbers_are_exact():
    assert P("0.1") == ex.Number(Fraction(1, 10))
    assert P("1.50") == ex.Number(Fraction(3, 2))
    assert P("2") == ex.Number(2)


def test_identifiers_calls_and_comments():
    stmt = ex.parse_statement("u' = f(a, b_2)  # trailing comment\n")
    assert stmt.left == ex.Symbol("u'")
    assert stmt.right == ex.Apply("f", (ex.Symbol("a"), ex.Symbol("b_2")))
    assert ex.free_symbols(stmt) == {"u'", "a", "b_2"}
    assert ex.applied_functions(stmt) == {"f"}


def test_multiline_statement():
    stmt = ex.parse_statement("x = y\n  + z")
    assert ex.render(stmt) == "x = y + z"


@pytest.mark.parametrize("source, line, column", [
    ("", 1, 1),
    ("x + 1", 1, 6),
    ("x = = y", 1, 5),
    ("x = y $ 2", 1, 7),
    ("x = (y", 1, 7),
    ("x = y)", 1, 6),
    ("x = f()", 1, 7),
    ("x = 3x", 1, 6),
    ("x = 1.", 1, 6),
    ("x = y\n  + * z", 2, 5),
])
def test_parse_errors_carry_position(source, line, column):
    with pytest.raises(ParseError) as info:
        ex.parse_statement(source)
    assert (info.value.line, info.value.column) == (line, column)
    assert str(info.value).startswith(f"{line}:{column}:")


@pytest.mark.parametrize("source", [
    "x = 2^3^2", "x = (a^b)^c", "x = -a^2", "x = (-a)^2", "x = --a", "x = a - -b",
    "x = a - (b - c)", "x = a/(b/c)", "x = -(a + b)", "x = a*(b + c)", "x = 1.5*y",
    "D(u, t) + u*D(u, x) = -1/rho*D(p, x) + nu*lap(u, x)",
])
def test_render_round_trip(source):
    stmt = ex.parse_statement(source)
    assert ex.parse_statement(ex.render(stmt)) == stmt
    assert ex.render(stmt) == source


def test_render_minimal_parentheses():
    assert ex.render(P("((a)) + ((b*c))")) == "a + b*c"
    assert ex.render(P("a^(b^c)")) == "a^b^c"


def test_render_non_decimal_fraction():
    assert ex.render(ex.Number(Fraction(1, 3))) == "(1/3)"
    assert ex.render(ex.Number(Fraction(5, 4))) == "1.25"


def test_substitute_replaces_leaves_only():
    e = P("f(a) + a*b")
    assert ex.substitute(e, {"a": P("c + 1")}) == P("f(c + 1) + (c + 1)*b")
    # function names are not substituted
    assert ex.substitute(P("a(x)"), {"a": ex.Symbol("z")}) == P("a(x)")


def test_find_cycle():
    assert ex.find_cycle({"a": {"b"}, "b": {"c"}, "c": set()}) is None
    assert ex.find_cycle({"a": {"b"}, "b": {"a"}}) == ["a", "b", "a"]
    assert ex.find_cycle({"a": {"a"}}) == ["a", "a"]


def test_expand_auxiliaries_transitively():
    out = ex.expand_auxiliaries({"a": "b + 1", "b": "c*2"})
    assert out["a"] == P("c*2 + 1")


def test_auxiliary_cycle_raises():
    with pytest.raises(CycleError) as info:
        ex.expand_auxiliaries({"a": "b + 1", "b": "a"})
    assert info.value.cycle == ["a", "b", "a"]
    assert str(info.value) == "auxiliary cycle a→b→a"


def test_inline_auxiliaries():
    stmt = ex.parse_statement("y = k*x")
    out = ex.inline_auxiliaries(stmt, {"k": "c1/c2"})
    assert out == ex.parse_statement("y = c1/c2*x")
