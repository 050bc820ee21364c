import random

import pytest
from hypothesis import given, strategies as st

from ielc.corpus import random_sample
from ielc.parser import parse_term, print_term
from ielc.syntax import (
    Lam, LetCirc, Var, all_names, alpha_eq, alpha_key, children, free_vars, fresh_name,
    rename_binders, replace_at, size, substitute, substitute_sim, subterm, well_formed,
)

seeds = st.integers(0, 10**9)


def sample(seed, max_size=20):
    return random_sample(random.Random(seed), max_size=max_size)


# ------------- free variables and fresh names -------------

def test_free_vars_of_let_ignore_body() -> None:
    t = parse_term("let o x = f in g x")
    # the body is closed off: g is not free in the let
    assert free_vars(t) == {"f"}


def test_fresh_name_is_deterministic() -> None:
    assert fresh_name("x", {"x", "x1"}) == "x2"
    assert fresh_name("x3", {"x1"}) == "x2"
    assert fresh_name("y", set()) == "y1"


def test_ill_formed_let_rejected() -> None:
    assert not well_formed(LetCirc(("x", "x"), (Var("a"), Var("b")), Var("x")))
    with pytest.raises(ValueError):
        substitute(LetCirc(("x", "x"), (Var("a"), Var("b")), Var("x")), "a", Var("c"))


# ------------- substitution: examples -------------

def test_substitution_avoids_capture() -> None:
    t = substitute(parse_term("\\y:a. x"), "x", Var("y"))
    assert t == Lam("y1", Var("y"), t.ty)
    assert alpha_eq(t, parse_term("\\z:a. y"))


def test_substitution_stops_at_let_body() -> None:
    t = substitute(parse_term("let o y = x in x"), "x", Var("q"))
    assert print_term(t) == "let o y = q in x"


def test_simultaneous_is_not_sequential() -> None:
    t = parse_term("<x, y>")
    assert print_term(substitute_sim(t, [("x", Var("y")), ("y", Var("x"))])) == "<y, x>"
    with pytest.raises(ValueError):
        substitute_sim(t, [("x", Var("a")), ("x", Var("b"))])


# ------------- substitution: properties -------------

@given(seeds, seeds)
def test_substitution_free_vars(seed1, seed2) -> None:
    t, s = sample(seed1).term, sample(seed2, 8).term
    fv = free_vars(t)
    for x in sorted(fv)[:2] or ["nowhere"]:
        expected = (fv - {x}) | (free_vars(s) if x in fv else frozenset())
        assert free_vars(substitute(t, x, s)) == expected


@given(seeds)
def test_substituting_non_free_is_identity(seed) -> None:
    t = sample(seed).term
    assert substitute(t, "not_free", Var("q")) == t


@given(seeds, seeds)
def test_substitution_respects_alpha(seed1, seed2) -> None:
    t, s = sample(seed1).term, sample(seed2, 8).term
    # rename every lambda binder to something fresh, then substitute in both
    names = all_names(t) | all_names(s)

    def rename(u):
        if isinstance(u, Lam):
            new = fresh_name("r", names)
            names.add(new)
            return Lam(new, rename(substitute(u.body, u.binder, Var(new))), u.ty)
        if isinstance(u, LetCirc):
            return LetCirc(u.binders, tuple(rename(a) for a in u.args), rename(u.body))
        kids = children(u)
        for i, k in enumerate(kids):
            u = replace_at(u, (i,), rename(k))
        return u

    r = rename(t)
    assert alpha_eq(t, r)
    for x in sorted(free_vars(t))[:1]:
        assert alpha_eq(substitute(t, x, s), substitute(r, x, s))


@given(seeds)
def test_alpha_key_is_stable_under_printing(seed) -> None:
    t = sample(seed).term
    assert alpha_key(parse_term(print_term(t))) == alpha_key(t)


@given(seeds)
def test_rename_binders_preserves_alpha(seed) -> None:
    t = LetCirc(("x", "y"), (Var("a"), Var("b")), sample(seed).term)
    r = rename_binders(t, {"x", "y"})
    assert not set(r.binders) & {"x", "y"}
    assert alpha_eq(t, r)


@given(seeds)
def test_paths_address_subterms(seed) -> None:
    t = sample(seed).term
    for i, k in enumerate(children(t)):
        assert subterm(t, (i,)) is k
        assert replace_at(t, (i,), k) == t
    assert size(t) == 1 + sum(size(k) for k in children(t))
