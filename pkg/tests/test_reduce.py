import random

import pytest
from hypothesis import given, strategies as st

from ielc.corpus import random_sample
from ielc.parser import parse_term, print_term
from ielc.reduce import (
    FuelExhausted, NoRedex, RedexSite, contract, first_redex, is_normal, joinable,
    local_confluence_failures, normal_form, normalize, reachable, redexes, step, successors,
)
from ielc.syntax import alpha_eq
from ielc.typecheck import infer


def nf(src: str) -> str:
    return print_term(normal_form(parse_term(src)))


# ------------- one rule at a time -------------

def test_beta_and_projections() -> None:
    assert nf("(\\x:a. <x, x>) y") == "<y, y>"
    assert nf("p1 <u, v>") == "u"
    assert nf("p2 <u, v>") == "v"


def test_let_pure_substitutes_simultaneously() -> None:
    assert nf("let o x = pure m in x") == "pure m"
    assert nf("let o g, y = pure f, pure x in g y") == "pure (f x)"
    assert nf("let o x, y = pure y, pure x in <x, y>") == "pure <y, x>"


def test_let_empty() -> None:
    assert nf("let o _ = _ in m") == "pure m"


def test_let_flatten() -> None:
    assert nf("let o x = (let o y = n in q) in r") == "let o y = n in r"
    assert nf("let o x = (let o y = n in y) in <x, x>") == "let o y = n in <y, y>"


def test_flatten_renames_inner_binders_that_clash() -> None:
    # inner y would clash with the outer binder y
    t = parse_term("let o x, y = (let o y = n in y), k in <x, y>")
    out = normal_form(t)
    assert alpha_eq(out, parse_term("let o y1, y = n, k in <y1, y>"))


def test_sites_are_leftmost_outermost_first() -> None:
    t = parse_term("let o x = (let o _ = _ in m) in x")
    assert [str(s) for s in redexes(t)] == ["LetFlatten[0] @ root", "LetEmpty @ 0"]
    assert first_redex(t) == RedexSite((), "LetFlatten", 0)


def test_contract_rejects_wrong_rule() -> None:
    with pytest.raises(NoRedex):
        contract(parse_term("p1 <u, v>"), "Proj2")
    with pytest.raises(NoRedex):
        step(parse_term("x"), RedexSite((0,), "Beta"))


def test_fuel() -> None:
    omega = parse_term("(\\x:a. x x) (\\x:a. x x)")
    with pytest.raises(FuelExhausted) as info:
        normalize(omega, 25)
    assert len(info.value.trace) == 25
    with pytest.raises(FuelExhausted):
        normalize(parse_term("p1 <u, v>"), 0)
    assert normalize(parse_term("x"), 0)[0] == parse_term("x")


def test_trace_lines() -> None:
    _, trace = normalize(parse_term("p1 <(\\x:a. x) u, v>"))
    assert trace.lines() == ["Proj1 @ root  (\\x:a. x) u", "Beta @ root  u"]


# ------------- let-over-let critical pairs -------------

def test_critical_pair_pure_inner_let() -> None:
    # outer let over an inner let whose arguments are all pure
    t = parse_term("let o x = (let o y1, y2 = pure n1, pure n2 in <y1, y2>) in <x, x>")
    rules = {s.rule for s in redexes(t)}
    assert rules == {"LetFlatten", "LetPure"}
    assert local_confluence_failures(t) == []
    assert print_term(normal_form(t)) == "pure <<n1, n2>, <n1, n2>>"


def test_critical_pair_empty_inner_let() -> None:
    t = parse_term("let o x = (let o _ = _ in \\z:a. z) in x")
    (s1, r1), (s2, r2) = successors(t)
    assert {s1.rule, s2.rule} == {"LetFlatten", "LetEmpty"}
    meet = joinable(r1, r2)
    assert meet is not None and print_term(normal_form(meet)) == "pure (\\z:a. z)"


def test_reachable() -> None:
    t = parse_term("(\\x:a. p1 <x, x>) u")
    assert reachable(t, parse_term("u"), 10)
    assert not reachable(t, parse_term("v"), 10)


# ------------- properties over generated terms -------------

seeds = st.integers(0, 10**9)


@given(seeds)
def test_subject_reduction_one_step(seed) -> None:
    s = random_sample(random.Random(seed))
    for _, u in successors(s.term):
        assert infer(s.ctx, u) == s.ty


@given(seeds)
def test_normal_forms_are_normal_and_typed(seed) -> None:
    s = random_sample(random.Random(seed))
    out = normal_form(s.term)
    assert is_normal(out)
    assert infer(s.ctx, out) == s.ty


@given(seeds)
def test_normalization_is_deterministic(seed) -> None:
    s = random_sample(random.Random(seed))
    a, ta = normalize(s.term)
    b, tb = normalize(s.term)
    assert a == b and ta.lines() == tb.lines()


@given(seeds)
def test_local_confluence(seed) -> None:
    s = random_sample(random.Random(seed), max_size=20)
    assert local_confluence_failures(s.term) == []
