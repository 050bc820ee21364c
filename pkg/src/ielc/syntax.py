"""Abstract syntax of the modal lambda calculus.

Terms use named variables.  Binders are renamed on demand when a
substitution would capture; comparisons go through ``alpha_eq``.

A ``LetCirc`` node binds its names in the body only, and the body is
typed in a context made of those names alone.  Accordingly the body
does not contribute free variables, and substitution never enters it.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union


# -- types -----------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Arrow:
    domain: "Type"
    codomain: "Type"


@dataclass(frozen=True)
class Product:
    left: "Type"
    right: "Type"


@dataclass(frozen=True)
class Circle:
    body: "Type"


@dataclass(frozen=True)
class Nabla:
    """Computation type of the monadic metalanguage (target of translation only)."""
    body: "Type"


Type = Union[Atom, Arrow, Product, Circle]


# -- terms -----------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Lam:
    binder: str
    body: "Term"
    ty: Type | None = None  # Church-style annotation on the binder


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Pair:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Proj:
    index: int
    body: "Term"

    def __post_init__(self):
        if self.index not in (1, 2):
            raise ValueError(f"projection index must be 1 or 2, got {self.index}")


@dataclass(frozen=True)
class Pure:
    body: "Term"


@dataclass(frozen=True)
class LetCirc:
    binders: tuple[str, ...]
    args: tuple["Term", ...]
    body: "Term"

    def __post_init__(self):
        # accept lists for convenience but store tuples so nodes stay hashable
        object.__setattr__(self, "binders", tuple(self.binders))
        object.__setattr__(self, "args", tuple(self.args))


Term = Union[Var, Lam, App, Pair, Proj, Pure, LetCirc]


class IllFormedTerm(ValueError):
    pass


class Context:
    """Ordered, duplicate-free list of type declarations."""

    def __init__(self, decls: Iterable[tuple[str, Type]] = ()):
        self._decls: tuple[tuple[str, Type], ...] = tuple(decls)
        self._index: dict[str, Type] = {}
        for name, ty in self._decls:
            if name in self._index:
                raise ValueError(f"duplicate declaration of {name!r} in context")
            self._index[name] = ty

    def __iter__(self):
        return iter(self._decls)

    def __len__(self):
        return len(self._decls)

    def __contains__(self, name):
        return name in self._index

    def __getitem__(self, name: str) -> Type:
        return self._index[name]

    def get(self, name, default=None):
        return self._index.get(name, default)

    def names(self) -> list[str]:
        return [n for n, _ in self._decls]

    def extend(self, name: str, ty: Type) -> "Context":
        """Add ``name : ty``, replacing an earlier declaration of ``name``."""
        return Context([(n, t) for n, t in self._decls if n != name] + [(name, ty)])

    def restrict(self, names) -> "Context":
        keep = set(names)
        return Context([(n, t) for n, t in self._decls if n in keep])

    def __eq__(self, other):
        return isinstance(other, Context) and self._decls == other._decls

    def __hash__(self):
        return hash(self._decls)

    def __repr__(self):
        return f"Context({list(self._decls)!r})"


# -- well-formedness, free variables ---------------------------------------

def children(t: Term) -> tuple[Term, ...]:
    """Immediate subterms, in the order used by redex paths."""
    if isinstance(t, Var):
        return ()
    if isinstance(t, Lam):
        return (t.body,)
    if isinstance(t, App):
        return (t.fun, t.arg)
    if isinstance(t, Pair):
        return (t.left, t.right)
    if isinstance(t, (Proj, Pure)):
        return (t.body,)
    if isinstance(t, LetCirc):
        return t.args + (t.body,)
    raise TypeError(f"not a term: {t!r}")


def with_children(t: Term, kids: Sequence[Term]) -> Term:
    if isinstance(t, Var):
        return t
    if isinstance(t, Lam):
        return Lam(t.binder, kids[0], t.ty)
    if isinstance(t, App):
        return App(kids[0], kids[1])
    if isinstance(t, Pair):
        return Pair(kids[0], kids[1])
    if isinstance(t, Proj):
        return Proj(t.index, kids[0])
    if isinstance(t, Pure):
        return Pure(kids[0])
    if isinstance(t, LetCirc):
        return LetCirc(t.binders, tuple(kids[:-1]), kids[-1])
    raise TypeError(f"not a term: {t!r}")


def subterm(t: Term, path: Sequence[int]) -> Term:
    for i in path:
        t = children(t)[i]
    return t


def replace_at(t: Term, path: Sequence[int], new: Term) -> Term:
    if not path:
        return new
    kids = list(children(t))
    kids[path[0]] = replace_at(kids[path[0]], path[1:], new)
    return with_children(t, kids)


def size(t: Term) -> int:
    return 1 + sum(size(c) for c in children(t))


def well_formed(t: Term) -> bool:
    if isinstance(t, LetCirc):
        if len(t.binders) != len(t.args) or len(set(t.binders)) != len(t.binders):
            return False
    return all(well_formed(c) for c in children(t))


def _require_wf(t: Term):
    if not well_formed(t):
        raise IllFormedTerm(f"ill-formed term: {t!r}")


def _fv(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, Lam):
        return _fv(t.body) - {t.binder}
    if isinstance(t, LetCirc):
        out: frozenset[str] = frozenset()
        for m in t.args:
            out |= _fv(m)
        return out
    out = frozenset()
    for c in children(t):
        out |= _fv(c)
    return out


def free_vars(t: Term) -> frozenset[str]:
    _require_wf(t)
    return _fv(t)


def all_names(t: Term) -> set[str]:
    """Every variable name occurring anywhere in ``t``, bound or free."""
    if isinstance(t, Var):
        out = {t.name}
    elif isinstance(t, Lam):
        out = {t.binder}
    elif isinstance(t, LetCirc):
        out = set(t.binders)
    else:
        out = set()
    for c in children(t):
        out |= all_names(c)
    return out


_SUFFIX = re.compile(r"^(.*?)(\d+)$")


def fresh_name(base: str, avoid) -> str:
    """Smallest ``base<k>`` (k >= 1) outside ``avoid``; numeric suffixes are stripped first."""
    m = _SUFFIX.match(base)
    stem = m.group(1) if m and m.group(1) else base
    k = 1
    while f"{stem}{k}" in avoid:
        k += 1
    return f"{stem}{k}"


# -- substitution ----------------------------------------------------------

def _subst(t: Term, sub: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return sub.get(t.name, t)
    if isinstance(t, Lam):
        inner = {k: v for k, v in sub.items() if k != t.binder}
        if not inner:
            return t
        body_fv = _fv(t.body)
        inner = {k: v for k, v in inner.items() if k in body_fv}
        if not inner:
            return t
        inner_fv = frozenset().union(*(_fv(v) for v in inner.values()))
        binder, body = t.binder, t.body
        if binder in inner_fv:
            new = fresh_name(binder, inner_fv | body_fv | set(inner))
            body = _subst(body, {binder: Var(new)})
            binder = new
        return Lam(binder, _subst(body, inner), t.ty)
    if isinstance(t, LetCirc):
        return LetCirc(t.binders, tuple(_subst(m, sub) for m in t.args), t.body)
    return with_children(t, [_subst(c, sub) for c in children(t)])


def substitute(t: Term, x: str, s: Term) -> Term:
    """Capture-avoiding ``t[x := s]``."""
    _require_wf(t)
    _require_wf(s)
    return _subst(t, {x: s})


def substitute_sim(t: Term, pairs: Sequence[tuple[str, Term]]) -> Term:
    """Simultaneous ``t[x1 := s1, ..., xn := sn]``."""
    names = [x for x, _ in pairs]
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate names in simultaneous substitution: {names}")
    _require_wf(t)
    for _, s in pairs:
        _require_wf(s)
    if not pairs:
        return t
    return _subst(t, dict(pairs))


def rename_binders(t: LetCirc, avoid) -> LetCirc:
    """Rename the binders of a let node away from ``avoid`` (body updated to match)."""
    taken = set(avoid) | set(t.binders) | all_names(t.body)
    new_names = []
    for b in t.binders:
        if b in avoid:
            nb = fresh_name(b, taken)
            taken.add(nb)
            new_names.append(nb)
        else:
            new_names.append(b)
    renaming = [(b, Var(nb)) for b, nb in zip(t.binders, new_names) if b != nb]
    body = substitute_sim(t.body, renaming) if renaming else t.body
    return LetCirc(tuple(new_names), t.args, body)


# -- alpha-equivalence -----------------------------------------------------

def alpha_key(t: Term, env: Mapping[str, int] | None = None, depth: int = 0):
    """A hashable key equal for exactly the alpha-equivalent terms.

    Bound occurrences become binder depths; free ones keep their names.
    A let body starts from an environment holding only the let's binders.
    """
    env = env or {}
    if isinstance(t, Var):
        if t.name in env:
            return ("b", env[t.name])
        return ("f", t.name)
    if isinstance(t, Lam):
        inner = dict(env)
        inner[t.binder] = depth
        return ("lam", t.ty, alpha_key(t.body, inner, depth + 1))
    if isinstance(t, App):
        return ("app", alpha_key(t.fun, env, depth), alpha_key(t.arg, env, depth))
    if isinstance(t, Pair):
        return ("pair", alpha_key(t.left, env, depth), alpha_key(t.right, env, depth))
    if isinstance(t, Proj):
        return ("proj", t.index, alpha_key(t.body, env, depth))
    if isinstance(t, Pure):
        return ("pure", alpha_key(t.body, env, depth))
    if isinstance(t, LetCirc):
        args = tuple(alpha_key(m, env, depth) for m in t.args)
        inner = {b: depth + i for i, b in enumerate(t.binders)}
        return ("let", args, alpha_key(t.body, inner, depth + len(t.binders)))
    raise TypeError(f"not a term: {t!r}")


def alpha_eq(t1: Term, t2: Term) -> bool:
    return alpha_key(t1) == alpha_key(t2)
