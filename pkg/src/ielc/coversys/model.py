"""Truth sets of (predicate) modal formulas in cover-system models.

    ||⊥|| = j∅               ||φ ∧ ψ|| = ||φ|| ∩ ||ψ||     ||φ ∨ ψ|| = j(||φ|| ∪ ||ψ||)
    ||φ → ψ|| = Heyting arrow of up-sets
    ||∀x φ|| = ⋂ over the domain      ||∃x φ|| = j(⋃ over the domain)
    ||O φ|| = <R> ||φ||

Propositional letters are nullary predicates.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..formula import (
    And, Bottom, Circ, Exists, Forall, Formula, Implies, Letter, Or, Pred, predicates,
)
from .system import CoverSystem, classify_cover_system, diamond, heyting_arrow, j_op, propositions

# which cover-system flag each logic needs
LOGIC_FLAGS = {"qiel--": "prenuclear", "qiel-": "mult_prenuclear", "qiel": "iel"}


class ModelError(ValueError):
    pass


@dataclass
class PredicateModel:
    system: CoverSystem
    domain: tuple
    valuation: dict  # predicate name -> {tuple of domain indices: proposition mask}
    arities: dict = field(default_factory=dict)

    def __post_init__(self):
        self.domain = tuple(self.domain)
        for name, table in self.valuation.items():
            ar = {len(k) for k in table}
            if len(ar) > 1:
                raise ModelError(f"predicate {name} has entries of different arities")
            self.arities.setdefault(name, ar.pop() if ar else 0)

    def check(self) -> None:
        """Every value must be a proposition and every tuple of the domain must be covered."""
        props = set(propositions(self.system))
        n = len(self.domain)
        for name, table in self.valuation.items():
            k = self.arities[name]
            for args in itertools.product(range(n), repeat=k):
                if args not in table:
                    raise ModelError(f"{name}{args} has no value")
                if table[args] not in props:
                    raise ModelError(f"value of {name}{args} is not a proposition")


def truth_set(m: PredicateModel, phi: Formula, sigma: dict | None = None,
              logic: str | None = None, check: bool = True) -> int:
    """``||phi||`` under the assignment ``sigma`` (variable -> domain index)."""
    s = m.system
    if logic is not None:
        flag = LOGIC_FLAGS.get(logic)
        if flag is None:
            raise ModelError(f"unknown logic {logic!r}")
        if not classify_cover_system(s)[flag]:
            raise ModelError(f"the system is not {flag}, as {logic} requires")
    sigma = dict(sigma or {})
    for name, k in predicates(phi).items():
        if name not in m.valuation:
            raise ModelError(f"unbound predicate {name}")
        if m.arities[name] != k:
            raise ModelError(f"predicate {name} used with arity {k}, valued with arity {m.arities[name]}")
    out = _eval(m, phi, sigma)
    if check and out not in set(propositions(s)):
        raise ModelError("truth set is not a proposition")
    return out


def _eval(m: PredicateModel, phi: Formula, sigma: dict) -> int:
    s = m.system
    if isinstance(phi, Letter):
        if phi.name not in m.valuation:
            raise ModelError(f"unbound predicate {phi.name}")
        return m.valuation[phi.name][()]
    if isinstance(phi, Pred):
        try:
            args = tuple(sigma[v] for v in phi.args)
        except KeyError as e:
            raise ModelError(f"variable {e.args[0]} is not assigned") from None
        return m.valuation[phi.name][args]
    if isinstance(phi, Bottom):
        return j_op(s, 0)
    if isinstance(phi, And):
        return _eval(m, phi.left, sigma) & _eval(m, phi.right, sigma)
    if isinstance(phi, Or):
        return j_op(s, _eval(m, phi.left, sigma) | _eval(m, phi.right, sigma))
    if isinstance(phi, Implies):
        return heyting_arrow(s.poset, _eval(m, phi.left, sigma), _eval(m, phi.right, sigma))
    if isinstance(phi, Circ):
        return diamond(s, _eval(m, phi.body, sigma))
    if isinstance(phi, (Forall, Exists)):
        parts = [_eval(m, phi.body, {**sigma, phi.var: d}) for d in range(len(m.domain))]
        if isinstance(phi, Forall):
            out = s.poset.full
            for x in parts:
                out &= x
            return out
        out = 0
        for x in parts:
            out |= x
        return j_op(s, out)
    raise TypeError(f"not a formula: {phi!r}")


def propositional_valuations(s: CoverSystem, letters_: list[str]):
    """Every assignment of propositions to the given letters, as models over a one-point domain."""
    props = propositions(s)
    for combo in itertools.product(props, repeat=len(letters_)):
        yield PredicateModel(s, ("*",), {p: {(): X} for p, X in zip(letters_, combo)})
