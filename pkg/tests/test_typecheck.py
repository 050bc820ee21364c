import random

import pytest
from hypothesis import given, strategies as st

from ielc.corpus import random_sample
from ielc.parser import parse_context, parse_term, parse_type, print_type
from ielc.syntax import Context, Pure, Var, Atom
from ielc.typecheck import (
    ArityMismatch, MissingAnnotation, Mismatch, NotAFunction, NotAProduct, NotModal,
    TypingError, UnboundVariable, check, generation_pure, infer, typable,
)


def ty(text, ctx="", src=None):
    return print_type(infer(parse_context(ctx), parse_term(src or text)))


def test_unit_and_axiom_8() -> None:
    assert ty("\\x:a. pure x") == "a -> O a"
    assert ty("\\f:O (a -> b). \\x:O a. let o g, y = f, x in g y") == "O (a -> b) -> O a -> O b"


def test_let_body_sees_only_binders() -> None:
    # z is in the outer context but not visible inside the body
    with pytest.raises(UnboundVariable):
        infer(parse_context("z : a\nn : O b"), parse_term("let o y = n in z"))
    assert ty("let o y = n in <y, y>", "z : a\nn : O b") == "O (b * b)"


def test_empty_let_needs_a_closed_body() -> None:
    assert ty("let o _ = _ in \\x:a. x") == "O (a -> a)"
    with pytest.raises(UnboundVariable):
        infer(parse_context("m : a"), parse_term("let o _ = _ in m"))


@pytest.mark.parametrize("src, ctx, err", [
    ("\\x:a. x x", "", NotAFunction),
    ("\\x:a. p1 x", "", NotAProduct),
    ("\\x:a. let o y = x in y", "", NotModal),
    ("(\\x:a. x) y", "y : b", Mismatch),
    ("free", "", UnboundVariable),
    ("\\x. x", "", MissingAnnotation),
])
def test_errors(src, ctx, err) -> None:
    with pytest.raises(err) as info:
        infer(parse_context(ctx), parse_term(src))
    assert isinstance(info.value, TypingError)
    assert info.value.term is not None


def test_arity_mismatch_on_direct_construction() -> None:
    from ielc.syntax import LetCirc
    with pytest.raises((ArityMismatch, ValueError)):
        infer(Context(), LetCirc(("x", "y"), (Var("a"),), Var("x")))


def test_check_and_typable() -> None:
    ctx = parse_context("m : a")
    assert check(ctx, parse_term("pure m"), parse_type("O a"))
    with pytest.raises(Mismatch):
        check(ctx, parse_term("pure m"), parse_type("O b"))
    assert not typable(ctx, parse_term("m m"))


def test_generation_pure() -> None:
    ctx = parse_context("m : a -> b")
    assert generation_pure(ctx, Pure(Var("m")))
    with pytest.raises(ValueError):
        generation_pure(ctx, Var("m"))


@given(st.integers(0, 10**9))
def test_generated_samples_have_their_type(seed) -> None:
    s = random_sample(random.Random(seed))
    assert infer(s.ctx, s.term) == s.ty


@given(st.integers(0, 10**9))
def test_weakening(seed) -> None:
    s = random_sample(random.Random(seed))
    wider = s.ctx.extend("unused_name", Atom("d"))
    assert infer(wider, s.term) == s.ty
