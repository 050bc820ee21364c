import random

import pytest
from hypothesis import given, strategies as st

from ielc.corpus import random_sample, random_type
from ielc.formula import BOT, And, Circ, Forall, Implies, Letter, Or, Pred
from ielc.parser import (
    ParseError, parse_context, parse_formula, parse_term, parse_term_spans, parse_type,
    print_context, print_formula, print_term, print_type,
)
from ielc.syntax import App, Arrow, Atom, Circle, LetCirc, Product, Pure, Var


def test_type_precedence() -> None:
    # * binds tighter than ->, O tighter than both, -> associates to the right
    assert parse_type("O a * b -> c -> d") == Arrow(
        Product(Circle(Atom("a")), Atom("b")), Arrow(Atom("c"), Atom("d")))
    assert parse_type("(a -> b) -> c") == Arrow(Arrow(Atom("a"), Atom("b")), Atom("c"))
    assert print_type(parse_type("O (a -> b) -> O a -> O b")) == "O (a -> b) -> O a -> O b"


def test_let_forms() -> None:
    t = parse_term("let o g, y = f, x in g y")
    assert t == LetCirc(("g", "y"), (Var("f"), Var("x")), App(Var("g"), Var("y")))
    empty = parse_term("let o _ = _ in m")
    assert empty == LetCirc((), (), Var("m"))
    assert parse_term("pure pure x") == Pure(Pure(Var("x")))


def test_let_arity_mismatch_is_a_parse_error() -> None:
    with pytest.raises(ParseError):
        parse_term("let o x, y = a in x")


def test_parse_error_position() -> None:
    with pytest.raises(ParseError) as info:
        parse_term("\\x : a.\n  (x")
    assert info.value.span.line == 2


def test_spans_point_at_nodes() -> None:
    t, spans = parse_term_spans("f  (g x)")
    # columns are 1-based; the argument node starts at g, inside the parentheses
    assert spans[id(t.arg)].column == 5


def test_context_file_format() -> None:
    ctx = parse_context("# declarations\nx : a\n\ny : O (a -> b)  # trailing\n")
    assert ctx.names() == ["x", "y"]
    assert parse_context(print_context(ctx)) == ctx
    with pytest.raises(ParseError):
        parse_context("x : a\nx : b\n")


def test_formulas() -> None:
    p, q = Letter("p"), Letter("q")
    assert parse_formula("p & O q -> O (p & q)") == Implies(And(p, Circ(q)), Circ(And(p, q)))
    assert parse_formula("~p") == Implies(p, BOT)
    assert parse_formula("forall x. P(x)") == Forall("x", Pred("P", ("x",)))


# ------------- round trips -------------

@given(st.integers(0, 10**9))
def test_type_round_trip(seed) -> None:
    ty = random_type(random.Random(seed), 3)
    assert parse_type(print_type(ty)) == ty


@given(st.integers(0, 10**9))
def test_term_round_trip(seed) -> None:
    t = random_sample(random.Random(seed), max_size=20).term
    back = parse_term(print_term(t))
    assert back == t
    assert print_term(back) == print_term(t)


@given(st.integers(0, 10**9))
def test_formula_round_trip(seed) -> None:
    rng = random.Random(seed)

    def gen(d):
        k = rng.randrange(6 if d else 2)
        if k == 0:
            return Letter(rng.choice("pqr"))
        if k == 1:
            return BOT
        if k == 2:
            return Circ(gen(d - 1))
        ctor = (And, Implies, Or)[k - 3]
        return ctor(gen(d - 1), gen(d - 1))

    f = gen(4)
    assert parse_formula(print_formula(f)) == f
