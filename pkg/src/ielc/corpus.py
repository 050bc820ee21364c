"""Random well-typed terms for the metatheory test suites.

Generation is type-directed and deliberately redex-heavy: beta redexes,
projections of pairs, nested lets and lets over ``pure`` arguments are all
produced directly.  Binder names come from a small pool so that shadowing
and capture situations show up often.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .syntax import (
    App, Arrow, Atom, Circle, Context, Lam, LetCirc, Pair, Product, Proj, Pure,
    Term, Type, Var, size,
)
from .typecheck import infer

ATOMS = ("a", "b", "c", "d")
NAMES = ("x", "y", "z", "w", "u", "v")


@dataclass(frozen=True)
class Sample:
    ctx: Context
    term: Term
    ty: Type


def random_type(rng: random.Random, depth: int = 2, atoms=ATOMS) -> Type:
    if depth <= 0 or rng.random() < 0.4:
        return Atom(rng.choice(atoms))
    k = rng.random()
    if k < 0.4:
        return Arrow(random_type(rng, depth - 1, atoms), random_type(rng, depth - 1, atoms))
    if k < 0.65:
        return Product(random_type(rng, depth - 1, atoms), random_type(rng, depth - 1, atoms))
    return Circle(random_type(rng, depth - 1, atoms))


class _Gen:
    def __init__(self, rng: random.Random, atoms=ATOMS):
        self.rng = rng
        self.atoms = atoms

    def small_type(self):
        return random_type(self.rng, 1, self.atoms)

    def term(self, ctx: list[tuple[str, Type]], ty: Type, budget: int) -> Term | None:
        rng = self.rng
        vars_of_ty = [n for n, t in _visible(ctx) if t == ty]
        if budget <= 1:
            return Var(rng.choice(vars_of_ty)) if vars_of_ty else None
        moves = ["intro", "intro", "beta", "proj", "app"]
        if vars_of_ty:
            moves += ["var"]
        if isinstance(ty, Circle):
            moves += ["let", "letpure", "letnest", "letnest", "letempty"]
        rng.shuffle(moves)
        for move in moves:
            out = getattr(self, "_" + move)(ctx, ty, budget)
            if out is not None:
                return out
        return None

    def _var(self, ctx, ty, budget):
        names = [n for n, t in _visible(ctx) if t == ty]
        return Var(self.rng.choice(names)) if names else None

    def _intro(self, ctx, ty, budget):
        if isinstance(ty, Arrow):
            x = self.rng.choice(NAMES)
            body = self.term(ctx + [(x, ty.domain)], ty.codomain, budget - 1)
            return None if body is None else Lam(x, body, ty.domain)
        if isinstance(ty, Product):
            half = (budget - 1) // 2
            left = self.term(ctx, ty.left, half)
            right = self.term(ctx, ty.right, budget - 1 - half) if left is not None else None
            return None if right is None else Pair(left, right)
        if isinstance(ty, Circle):
            body = self.term(ctx, ty.body, budget - 1)
            return None if body is None else Pure(body)
        return None

    def _beta(self, ctx, ty, budget):
        dom = self._known_type(ctx)
        x = self.rng.choice(NAMES)
        half = (budget - 2) // 2
        body = self.term(ctx + [(x, dom)], ty, budget - 2 - half)
        if body is None:
            return None
        arg = self.term(ctx, dom, half)
        return None if arg is None else App(Lam(x, body, dom), arg)

    def _proj(self, ctx, ty, budget):
        other = self._known_type(ctx)
        first = self.rng.random() < 0.5
        pty = Product(ty, other) if first else Product(other, ty)
        inner = self.term(ctx, pty, budget - 1)
        return None if inner is None else Proj(1 if first else 2, inner)

    def _app(self, ctx, ty, budget):
        funs = [(n, t) for n, t in _visible(ctx) if isinstance(t, Arrow) and t.codomain == ty]
        if not funs:
            return None
        name, fty = self.rng.choice(funs)
        arg = self.term(ctx, fty.domain, budget - 2)
        return None if arg is None else App(Var(name), arg)

    def _let(self, ctx, ty, budget, arg_mode="any", n=None):
        rng = self.rng
        if n is None:
            n = rng.choice((0, 1, 1, 2, 2, 3))
        binders = rng.sample(NAMES, n)
        tys = [ty.body if i == 0 and rng.random() < 0.7 else self._known_type(ctx)
               for i in range(n)]
        share = max(1, (budget - 1) // (n + 1))
        args = []
        for b_ty in tys:
            arg = self._let_arg(ctx, Circle(b_ty), share, arg_mode)
            if arg is None:
                return None
            args.append(arg)
        body = self.term(list(zip(binders, tys)), ty.body, share)
        if body is None:
            return None
        return LetCirc(tuple(binders), tuple(args), body)

    def _let_arg(self, ctx, cty, budget, mode):
        if mode == "pure":
            body = self.term(ctx, cty.body, budget - 1)
            return None if body is None else Pure(body)
        if mode == "nest" and budget > 2:
            out = self._let(ctx, cty, budget, self.rng.choice(("any", "pure")))
            if out is not None:
                return out
        return self.term(ctx, cty, budget)

    def _letpure(self, ctx, ty, budget):
        return self._let(ctx, ty, budget, "pure")

    def _letnest(self, ctx, ty, budget):
        return self._let(ctx, ty, budget, "nest")

    def _letempty(self, ctx, ty, budget):
        return self._let(ctx, ty, budget, n=0)

    def _known_type(self, ctx):
        pool = [t for _, t in _visible(ctx)]
        if pool and self.rng.random() < 0.6:
            return self.rng.choice(pool)
        return self.small_type()


def _visible(ctx):
    """Later declarations shadow earlier ones."""
    out = {}
    for n, t in ctx:
        out.pop(n, None)
        out[n] = t
    return list(out.items())


def random_context(rng: random.Random, atoms=ATOMS) -> Context:
    decls = [(f"k{a}", Atom(a)) for a in atoms]  # every atom inhabited
    for i in range(rng.randint(0, 3)):
        decls.append((f"g{i}", random_type(rng, 2, atoms)))
    return Context(decls)


def random_sample(rng: random.Random, max_size: int = 30, atoms=ATOMS) -> Sample:
    gen = _Gen(rng, atoms)
    while True:
        ctx = random_context(rng, atoms)
        ty = random_type(rng, 2, atoms)
        if rng.random() < 0.5:  # modal goals are where the let rules live
            ty = Circle(random_type(rng, 1, atoms))
        t = gen.term(list(ctx), ty, rng.randint(4, max_size))
        if t is None or size(t) > max_size:
            continue
        assert infer(ctx, t) == ty, "generator produced an ill-typed term"
        return Sample(ctx, t, ty)


def generate_corpus(n: int = 1000, seed: int = 0, max_size: int = 30, atoms=ATOMS) -> list[Sample]:
    rng = random.Random(seed)
    return [random_sample(rng, max_size, atoms) for _ in range(n)]
