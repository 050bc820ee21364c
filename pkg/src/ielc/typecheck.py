"""Type synthesis for the modal lambda calculus.

Lambda binders carry their type (``\\x:a. M``).  The body of
``let o x1..xn = M1..Mn in N`` is checked in the context ``x1:A1..xn:An``
alone, where ``Mi : O Ai`` in the outer context.
"""
from __future__ import annotations

from .parser import print_type
from .syntax import (
    App, Arrow, Circle, Context, Lam, LetCirc, Pair, Product, Proj, Pure, Term,
    Type, Var,
)


class TypingError(Exception):
    """Base class; ``term`` is the subterm whose rule premise failed."""

    def __init__(self, message: str, term: Term | None = None):
        super().__init__(message)
        self.term = term


class UnboundVariable(TypingError):
    def __init__(self, name: str, term=None):
        super().__init__(f"unbound variable {name}", term)
        self.name = name


class Mismatch(TypingError):
    def __init__(self, expected: Type, found: Type, at: Term | None = None):
        super().__init__(f"expected {print_type(expected)}, found {print_type(found)}", at)
        self.expected = expected
        self.found = found


class NotAFunction(TypingError):
    def __init__(self, ty: Type, term=None):
        super().__init__(f"applied a term of non-function type {print_type(ty)}", term)
        self.ty = ty


class NotAProduct(TypingError):
    def __init__(self, ty: Type, term=None):
        super().__init__(f"projected from non-product type {print_type(ty)}", term)
        self.ty = ty


class NotModal(TypingError):
    def __init__(self, ty: Type, term=None):
        super().__init__(f"let o argument has non-modal type {print_type(ty)}", term)
        self.ty = ty


class ArityMismatch(TypingError):
    def __init__(self, expected: int, found: int, term=None):
        super().__init__(f"let o binds {expected} names but has {found} arguments", term)
        self.expected = expected
        self.found = found


class MissingAnnotation(TypingError):
    def __init__(self, binder: str, term=None):
        super().__init__(f"lambda binder {binder} has no type annotation", term)
        self.binder = binder


class DuplicateBinding(TypingError):
    def __init__(self, name: str, term=None):
        super().__init__(f"{name} is bound twice", term)
        self.name = name


def as_context(ctx) -> Context:
    if isinstance(ctx, Context):
        return ctx
    items = list(ctx.items()) if isinstance(ctx, dict) else list(ctx)
    seen = set()
    for name, _ in items:
        if name in seen:
            raise DuplicateBinding(name)
        seen.add(name)
    return Context(items)


def infer(ctx, t: Term) -> Type:
    """The unique type of ``t`` under ``ctx``; raises a ``TypingError`` otherwise."""
    return _infer(as_context(ctx), t)


def _infer(ctx: Context, t: Term) -> Type:
    if isinstance(t, Var):
        ty = ctx.get(t.name)
        if ty is None:
            raise UnboundVariable(t.name, t)
        return ty
    if isinstance(t, Lam):
        if t.ty is None:
            raise MissingAnnotation(t.binder, t)
        return Arrow(t.ty, _infer(ctx.extend(t.binder, t.ty), t.body))
    if isinstance(t, App):
        fty = _infer(ctx, t.fun)
        if not isinstance(fty, Arrow):
            raise NotAFunction(fty, t.fun)
        aty = _infer(ctx, t.arg)
        if aty != fty.domain:
            raise Mismatch(fty.domain, aty, t.arg)
        return fty.codomain
    if isinstance(t, Pair):
        return Product(_infer(ctx, t.left), _infer(ctx, t.right))
    if isinstance(t, Proj):
        pty = _infer(ctx, t.body)
        if not isinstance(pty, Product):
            raise NotAProduct(pty, t.body)
        return pty.left if t.index == 1 else pty.right
    if isinstance(t, Pure):
        return Circle(_infer(ctx, t.body))
    if isinstance(t, LetCirc):
        if len(t.binders) != len(t.args):
            raise ArityMismatch(len(t.binders), len(t.args), t)
        inner = []
        for x, m in zip(t.binders, t.args):
            mty = _infer(ctx, m)
            if not isinstance(mty, Circle):
                raise NotModal(mty, m)
            if x in (n for n, _ in inner):
                raise DuplicateBinding(x, t)
            inner.append((x, mty.body))
        # the outer context is discarded for the body
        return Circle(_infer(Context(inner), t.body))
    raise TypeError(f"not a term: {t!r}")


def check(ctx, t: Term, ty: Type) -> bool:
    found = infer(ctx, t)
    if found != ty:
        raise Mismatch(ty, found, t)
    return True


def typable(ctx, t: Term) -> bool:
    try:
        infer(ctx, t)
    except TypingError:
        return False
    return True


def generation_pure(ctx, t: Term) -> bool:
    """If ``ctx |- pure M : O A`` then ``ctx |- M : A``."""
    if not isinstance(t, Pure):
        raise ValueError("generation_pure expects a term of the form pure M")
    outer = infer(ctx, t)
    if not isinstance(outer, Circle):
        raise ValueError("pure M did not receive a modal type")
    return infer(ctx, t.body) == outer.body
