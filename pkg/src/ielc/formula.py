"""Modal formulas: the propositional fragment used by Kripke semantics plus
predicates and quantifiers for cover-system models."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class Letter:
    name: str


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Circ:
    body: "Formula"


@dataclass(frozen=True)
class Pred:
    name: str
    args: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


Formula = Union[Letter, Bottom, And, Or, Implies, Circ, Pred, Forall, Exists]

BOT = Bottom()


def neg(f: Formula) -> Formula:
    return Implies(f, BOT)


def subformulas(f: Formula):
    """Post-order: every subformula appears after its children."""
    if isinstance(f, (And, Or, Implies)):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, (Circ, Forall, Exists)):
        yield from subformulas(f.body)
    yield f


def letters(f: Formula) -> list[str]:
    """Propositional letters of ``f`` in first-occurrence order."""
    seen: dict[str, None] = {}
    for g in subformulas(f):
        if isinstance(g, Letter):
            seen.setdefault(g.name)
    return list(seen)


def predicates(f: Formula) -> dict[str, int]:
    out: dict[str, int] = {}
    for g in subformulas(f):
        if isinstance(g, Pred):
            if out.setdefault(g.name, len(g.args)) != len(g.args):
                raise ValueError(f"predicate {g.name} used with two arities")
    return out


def is_propositional(f: Formula) -> bool:
    return not any(isinstance(g, (Pred, Forall, Exists)) for g in subformulas(f))


def substitute_letters(f: Formula, sub: dict[str, Formula]) -> Formula:
    if isinstance(f, Letter):
        return sub.get(f.name, f)
    if isinstance(f, (And, Or, Implies)):
        return type(f)(substitute_letters(f.left, sub), substitute_letters(f.right, sub))
    if isinstance(f, Circ):
        return Circ(substitute_letters(f.body, sub))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.var, substitute_letters(f.body, sub))
    return f
