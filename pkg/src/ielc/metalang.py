"""The monadic metalanguage and the translation into it.

The metalanguage is the simply-typed lambda calculus with products and a
type former ``V`` (written ∇ in the literature) with

    val M                 : V A      when M : A
    let val x = M in N    : V B      when M : V A and x:A (plus the outer context) |- N : V B

Unlike the modal let, the body of ``let val`` keeps the surrounding context.
Variables, abstractions, applications, pairs and projections reuse the
classes from ``ielc.syntax``; ``Val`` and ``LetVal`` are added here.

Reduction: beta, projections, and

    ValBeta   let val x = val M in N                  -> N[x := M]
    Commute   let val x = (let val y = N in P) in M   -> let val y = N in (let val x = P in M)
    Eta       let val x = M in val x                  -> M
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator, Mapping, Union

from . import syntax as sx
from .parser import (
    ParseError, _Stream, _type, print_type, tokenize,
)
from .syntax import App, Arrow, Atom, Lam, Nabla, Pair, Product, Proj, Var, fresh_name
from .typecheck import (
    Mismatch, MissingAnnotation, NotAFunction, NotAProduct, TypingError,
    UnboundVariable, as_context,
)

ML_KEYWORDS = frozenset({"let", "val", "in", "p1", "p2"})
ML_RULES = ("Beta", "Proj1", "Proj2", "ValBeta", "Commute", "Eta")


MLType = Union[Atom, Arrow, Product, Nabla]


@dataclass(frozen=True)
class Val:
    body: "MLTerm"


@dataclass(frozen=True)
class LetVal:
    binder: str
    bound: "MLTerm"
    body: "MLTerm"


MLTerm = Union[Var, Lam, App, Pair, Proj, Val, LetVal]


class NotComputation(TypingError):
    def __init__(self, ty, term=None):
        super().__init__(f"let val expects a computation type, found {print_ml_type(ty)}", term)
        self.ty = ty


# -- structure -------------------------------------------------------------

def ml_children(t: MLTerm) -> tuple:
    if isinstance(t, Var):
        return ()
    if isinstance(t, (Lam, Proj, Val)):
        return (t.body,)
    if isinstance(t, App):
        return (t.fun, t.arg)
    if isinstance(t, Pair):
        return (t.left, t.right)
    if isinstance(t, LetVal):
        return (t.bound, t.body)
    raise TypeError(f"not a metalanguage term: {t!r}")


def ml_with_children(t: MLTerm, kids) -> MLTerm:
    if isinstance(t, Var):
        return t
    if isinstance(t, Lam):
        return Lam(t.binder, kids[0], t.ty)
    if isinstance(t, Proj):
        return Proj(t.index, kids[0])
    if isinstance(t, Val):
        return Val(kids[0])
    if isinstance(t, App):
        return App(kids[0], kids[1])
    if isinstance(t, Pair):
        return Pair(kids[0], kids[1])
    if isinstance(t, LetVal):
        return LetVal(t.binder, kids[0], kids[1])
    raise TypeError(f"not a metalanguage term: {t!r}")


def ml_size(t: MLTerm) -> int:
    return 1 + sum(ml_size(c) for c in ml_children(t))


def ml_free_vars(t: MLTerm) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, Lam):
        return ml_free_vars(t.body) - {t.binder}
    if isinstance(t, LetVal):
        return ml_free_vars(t.bound) | (ml_free_vars(t.body) - {t.binder})
    out = frozenset()
    for c in ml_children(t):
        out |= ml_free_vars(c)
    return out


def ml_all_names(t: MLTerm) -> set[str]:
    if isinstance(t, Var):
        out = {t.name}
    elif isinstance(t, (Lam, LetVal)):
        out = {t.binder}
    else:
        out = set()
    for c in ml_children(t):
        out |= ml_all_names(c)
    return out


def _ml_subst(t: MLTerm, sub: Mapping[str, MLTerm]) -> MLTerm:
    if isinstance(t, Var):
        return sub.get(t.name, t)
    if isinstance(t, (Lam, LetVal)):
        bound = _ml_subst(t.bound, sub) if isinstance(t, LetVal) else None
        body_fv = ml_free_vars(t.body)
        inner = {k: v for k, v in sub.items() if k != t.binder and k in body_fv}
        binder, body = t.binder, t.body
        if inner:
            inner_fv = frozenset().union(*(ml_free_vars(v) for v in inner.values()))
            if binder in inner_fv:
                new = fresh_name(binder, inner_fv | body_fv | set(inner))
                body = _ml_subst(body, {binder: Var(new)})
                binder = new
            body = _ml_subst(body, inner)
        if isinstance(t, Lam):
            return Lam(binder, body, t.ty)
        return LetVal(binder, bound, body)
    return ml_with_children(t, [_ml_subst(c, sub) for c in ml_children(t)])


def ml_substitute(t: MLTerm, x: str, s: MLTerm) -> MLTerm:
    """Capture-avoiding ``t[x := s]``."""
    return _ml_subst(t, {x: s})


def ml_substitute_sim(t: MLTerm, pairs) -> MLTerm:
    names = [x for x, _ in pairs]
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate names in simultaneous substitution: {names}")
    return _ml_subst(t, dict(pairs)) if pairs else t


def ml_alpha_key(t: MLTerm, env: Mapping[str, int] | None = None, depth: int = 0):
    env = env or {}
    if isinstance(t, Var):
        return ("b", env[t.name]) if t.name in env else ("f", t.name)
    if isinstance(t, (Lam, LetVal)):
        inner = dict(env)
        inner[t.binder] = depth
        body = ml_alpha_key(t.body, inner, depth + 1)
        if isinstance(t, Lam):
            return ("lam", t.ty, body)
        return ("letval", ml_alpha_key(t.bound, env, depth), body)
    if isinstance(t, App):
        return ("app", ml_alpha_key(t.fun, env, depth), ml_alpha_key(t.arg, env, depth))
    if isinstance(t, Pair):
        return ("pair", ml_alpha_key(t.left, env, depth), ml_alpha_key(t.right, env, depth))
    if isinstance(t, Proj):
        return ("proj", t.index, ml_alpha_key(t.body, env, depth))
    if isinstance(t, Val):
        return ("val", ml_alpha_key(t.body, env, depth))
    raise TypeError(f"not a metalanguage term: {t!r}")


def ml_alpha_eq(t1: MLTerm, t2: MLTerm) -> bool:
    return ml_alpha_key(t1) == ml_alpha_key(t2)


# -- typing ----------------------------------------------------------------

def ml_infer(ctx, t: MLTerm) -> MLType:
    return _ml_infer(as_context(ctx), t)


def _ml_infer(ctx: sx.Context, t: MLTerm) -> MLType:
    if isinstance(t, Var):
        ty = ctx.get(t.name)
        if ty is None:
            raise UnboundVariable(t.name, t)
        return ty
    if isinstance(t, Lam):
        if t.ty is None:
            raise MissingAnnotation(t.binder, t)
        return Arrow(t.ty, _ml_infer(ctx.extend(t.binder, t.ty), t.body))
    if isinstance(t, App):
        fty = _ml_infer(ctx, t.fun)
        if not isinstance(fty, Arrow):
            raise NotAFunction(fty, t.fun)
        aty = _ml_infer(ctx, t.arg)
        if aty != fty.domain:
            raise Mismatch(fty.domain, aty, t.arg)
        return fty.codomain
    if isinstance(t, Pair):
        return Product(_ml_infer(ctx, t.left), _ml_infer(ctx, t.right))
    if isinstance(t, Proj):
        pty = _ml_infer(ctx, t.body)
        if not isinstance(pty, Product):
            raise NotAProduct(pty, t.body)
        return pty.left if t.index == 1 else pty.right
    if isinstance(t, Val):
        return Nabla(_ml_infer(ctx, t.body))
    if isinstance(t, LetVal):
        mty = _ml_infer(ctx, t.bound)
        if not isinstance(mty, Nabla):
            raise NotComputation(mty, t.bound)
        nty = _ml_infer(ctx.extend(t.binder, mty.body), t.body)
        if not isinstance(nty, Nabla):
            raise NotComputation(nty, t.body)
        return nty
    raise TypeError(f"not a metalanguage term: {t!r}")


# -- reduction -------------------------------------------------------------

def _ml_local(t: MLTerm) -> Iterator[str]:
    if isinstance(t, App) and isinstance(t.fun, Lam):
        yield "Beta"
    elif isinstance(t, Proj) and isinstance(t.body, Pair):
        yield "Proj1" if t.index == 1 else "Proj2"
    elif isinstance(t, LetVal):
        if isinstance(t.bound, Val):
            yield "ValBeta"
        if isinstance(t.bound, LetVal):
            yield "Commute"
        if isinstance(t.body, Val) and t.body.body == Var(t.binder):
            yield "Eta"


def _ml_sites(t: MLTerm, path):
    for rule in _ml_local(t):
        yield path, rule
    for i, c in enumerate(ml_children(t)):
        yield from _ml_sites(c, path + (i,))


def ml_redexes(t: MLTerm) -> list[tuple[tuple[int, ...], str]]:
    return list(_ml_sites(t, ()))


def ml_contract(t: MLTerm, rule: str) -> MLTerm:
    if rule == "Beta":
        return ml_substitute(t.fun.body, t.fun.binder, t.arg)
    if rule in ("Proj1", "Proj2"):
        return t.body.left if t.index == 1 else t.body.right
    if rule == "ValBeta":
        return ml_substitute(t.body, t.binder, t.bound.body)
    if rule == "Commute":
        inner = t.bound
        y, p = inner.binder, inner.body
        if y in ml_free_vars(t.body):
            new = fresh_name(y, ml_free_vars(t.body) | ml_all_names(p) | {t.binder})
            p = ml_substitute(p, y, Var(new))
            y = new
        return LetVal(y, inner.bound, LetVal(t.binder, p, t.body))
    if rule == "Eta":
        return t.bound
    raise ValueError(f"unknown metalanguage rule {rule}")


def _ml_replace(t: MLTerm, path, new: MLTerm) -> MLTerm:
    if not path:
        return new
    kids = list(ml_children(t))
    kids[path[0]] = _ml_replace(kids[path[0]], path[1:], new)
    return ml_with_children(t, kids)


def ml_step(t: MLTerm, path, rule: str) -> MLTerm:
    node = t
    for i in path:
        node = ml_children(node)[i]
    if rule not in _ml_local(node):
        raise ValueError(f"{rule} does not match at {path}")
    return _ml_replace(t, path, ml_contract(node, rule))


def ml_successors(t: MLTerm, eta: bool = True) -> list[MLTerm]:
    return [ml_step(t, p, r) for p, r in _ml_sites(t, ()) if eta or r != "Eta"]


class MLFuelExhausted(Exception):
    def __init__(self, fuel: int, last: MLTerm):
        super().__init__(f"no metalanguage normal form within {fuel} steps")
        self.fuel = fuel
        self.last = last


def ml_normalize(t: MLTerm, fuel: int = 100_000, eta: bool = True) -> tuple[MLTerm, int]:
    """Leftmost-outermost normal form and the number of steps taken."""
    steps = 0
    while True:
        site = next((s for s in _ml_sites(t, ()) if eta or s[1] != "Eta"), None)
        if site is None:
            return t, steps
        if steps >= fuel:
            raise MLFuelExhausted(fuel, t)
        t = ml_step(t, *site)
        steps += 1


def ml_reachable(src: MLTerm, dst: MLTerm, fuel: int = 1000, eta: bool = True) -> bool:
    """Breadth-first search for ``dst`` (up to alpha) from ``src``; ``fuel`` bounds expansions."""
    goal = ml_alpha_key(dst)
    start = ml_alpha_key(src)
    if start == goal:
        return True
    seen = {start}
    queue = deque([src])
    spent = 0
    while queue and spent < fuel:
        u = queue.popleft()
        spent += 1
        for v in ml_successors(u, eta):
            kv = ml_alpha_key(v)
            if kv == goal:
                return True
            if kv not in seen:
                seen.add(kv)
                queue.append(v)
    return False


# -- translation -----------------------------------------------------------

def translate_type(ty: sx.Type) -> MLType:
    if isinstance(ty, Atom):
        return ty
    if isinstance(ty, Arrow):
        return Arrow(translate_type(ty.domain), translate_type(ty.codomain))
    if isinstance(ty, Product):
        return Product(translate_type(ty.left), translate_type(ty.right))
    if isinstance(ty, sx.Circle):
        return Nabla(translate_type(ty.body))
    raise TypeError(f"not a type: {ty!r}")


def translate_context(ctx) -> sx.Context:
    return sx.Context([(n, translate_type(t)) for n, t in as_context(ctx)])


def translate_term(t: sx.Term) -> MLTerm:
    """Translate into the metalanguage.

    ``let o x1..xn = M1..Mn in N`` becomes the chain
    ``let val x1 = M1 in ... let val xn = Mn in val N``.  In the chain each
    ``Mj`` sits under the binders ``x1..x(j-1)``, so a binder that occurs free
    in a later argument is renamed first.
    """
    if not sx.well_formed(t):
        raise sx.IllFormedTerm(f"ill-formed term: {t!r}")
    return _tr(t)


def _tr(t: sx.Term) -> MLTerm:
    if isinstance(t, Var):
        return t
    if isinstance(t, Lam):
        return Lam(t.binder, _tr(t.body), None if t.ty is None else translate_type(t.ty))
    if isinstance(t, App):
        return App(_tr(t.fun), _tr(t.arg))
    if isinstance(t, Pair):
        return Pair(_tr(t.left), _tr(t.right))
    if isinstance(t, Proj):
        return Proj(t.index, _tr(t.body))
    if isinstance(t, sx.Pure):
        return Val(_tr(t.body))
    if isinstance(t, sx.LetCirc):
        arg_fv = [sx.free_vars(m) for m in t.args]
        taken = set(t.binders) | sx.all_names(t.body) | set().union(*arg_fv)
        binders, renaming = [], []
        for i, x in enumerate(t.binders):
            if any(x in fv for fv in arg_fv[i + 1:]):
                new = fresh_name(x, taken)
                taken.add(new)
                renaming.append((x, Var(new)))
                x = new
            binders.append(x)
        body = sx.substitute_sim(t.body, renaming) if renaming else t.body
        out = Val(_tr(body))
        for x, m in reversed(list(zip(binders, t.args))):
            out = LetVal(x, _tr(m), out)
        return out
    raise TypeError(f"not a term: {t!r}")


# -- surface syntax --------------------------------------------------------

def parse_ml_type(text: str) -> MLType:
    s = _Stream(tokenize(text))
    out = _type(s, "V", circ=Nabla)
    s.end()
    return out


def _ml_term(s: _Stream) -> MLTerm:
    if s.is_punct("\\"):
        s.advance()
        x = s.ident(ML_KEYWORDS)
        ty = None
        if s.is_punct(":"):
            s.advance()
            ty = _type(s, "V", circ=Nabla)
        s.expect_punct(".")
        return Lam(x, _ml_term(s), ty)
    if s.is_word("let"):
        s.advance()
        s.expect_word("val")
        x = s.ident(ML_KEYWORDS)
        s.expect_punct("=")
        bound = _ml_term(s)
        s.expect_word("in")
        return LetVal(x, bound, _ml_term(s))
    head = _ml_atom(s)
    while _ml_starts_atom(s):
        head = App(head, _ml_atom(s))
    return head


def _ml_starts_atom(s: _Stream) -> bool:
    t = s.tok
    if t.kind == "ident":
        return t.text not in ML_KEYWORDS or t.text in ("val", "p1", "p2")
    return s.is_punct("<") or s.is_punct("(")


def _ml_atom(s: _Stream) -> MLTerm:
    if s.is_word("val"):
        s.advance()
        return Val(_ml_atom(s))
    if s.is_word("p1") or s.is_word("p2"):
        idx = int(s.advance().text[1])
        return Proj(idx, _ml_atom(s))
    if s.is_punct("<"):
        s.advance()
        left = _ml_term(s)
        s.expect_punct(",")
        right = _ml_term(s)
        s.expect_punct(">")
        return Pair(left, right)
    if s.is_punct("("):
        s.advance()
        inner = _ml_term(s)
        s.expect_punct(")")
        return inner
    return Var(s.ident(ML_KEYWORDS))


def parse_ml_term(text: str) -> MLTerm:
    s = _Stream(tokenize(text))
    out = _ml_term(s)
    s.end()
    return out


def print_ml_type(ty: MLType) -> str:
    return print_type(ty)


def print_ml_term(t: MLTerm) -> str:
    def go(t, ctx):
        if isinstance(t, Var):
            return t.name
        if isinstance(t, Lam):
            ann = f":{print_ml_type(t.ty)}" if t.ty is not None else ""
            out = f"\\{t.binder}{ann}. {go(t.body, 'top')}"
            return out if ctx == "top" else f"({out})"
        if isinstance(t, LetVal):
            out = f"let val {t.binder} = {go(t.bound, 'top')} in {go(t.body, 'top')}"
            return out if ctx == "top" else f"({out})"
        if isinstance(t, App):
            out = f"{go(t.fun, 'fun')} {go(t.arg, 'arg')}"
            return f"({out})" if ctx == "arg" else out
        if isinstance(t, Pair):
            return f"<{go(t.left, 'top')}, {go(t.right, 'top')}>"
        if isinstance(t, Proj):
            return f"p{t.index} {go(t.body, 'arg')}"
        if isinstance(t, Val):
            return f"val {go(t.body, 'arg')}"
        raise TypeError(f"not a metalanguage term: {t!r}")

    return go(t, "top")


__all__ = [
    "Nabla", "Val", "LetVal", "MLType", "MLTerm", "NotComputation", "ParseError",
    "ml_infer", "ml_step", "ml_normalize", "ml_reachable", "ml_successors",
    "ml_redexes", "ml_substitute", "ml_alpha_eq", "ml_alpha_key", "ml_free_vars",
    "translate_type", "translate_context", "translate_term",
    "parse_ml_term", "parse_ml_type", "print_ml_term", "print_ml_type",
]
