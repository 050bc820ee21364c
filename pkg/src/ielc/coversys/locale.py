"""Finite lattices, finite locales with operators, and the S_L construction.

A finite distributive lattice is complete and a Heyting algebra, i.e. a
locale.  Elements are indices into ``elements``; an operator is a tuple
``m`` with ``m[a]`` the image of ``a``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import reduce

from .poset import DEFAULT_SUBSET_GUARD, FinitePoset, SizeGuardExceeded, bits, mask_of
from .system import CoverSystem, diamond, heyting_arrow, j_op, propositions


class LatticeError(ValueError):
    def __init__(self, condition: str, witness: tuple, message: str):
        super().__init__(message)
        self.condition = condition
        self.witness = witness


@dataclass(frozen=True)
class FiniteLattice:
    poset: FinitePoset
    meet: tuple = field(init=False, repr=False, compare=False)
    join: tuple = field(init=False, repr=False, compare=False)
    bottom: int = field(init=False, repr=False, compare=False)
    top: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        p = self.poset
        p.validate()
        n = p.size
        if n == 0:
            raise LatticeError("nonempty", (), "a lattice needs at least one element")
        meet = [[0] * n for _ in range(n)]
        join = [[0] * n for _ in range(n)]
        for a in range(n):
            for b in range(n):
                meet[a][b] = self._extremum(p.down(a) & p.down(b), p.down, "meet", (a, b))
                join[a][b] = self._extremum(p.up(a) & p.up(b), p.up, "join", (a, b))
        object.__setattr__(self, "meet", tuple(map(tuple, meet)))
        object.__setattr__(self, "join", tuple(map(tuple, join)))
        object.__setattr__(self, "bottom", self._extremum(p.full, p.up, "bottom", ()))
        object.__setattr__(self, "top", self._extremum(p.full, p.down, "top", ()))

    @staticmethod
    def _extremum(cands: int, cone, what, witness):
        """The element of ``cands`` whose ``cone`` contains all of ``cands``."""
        for c in bits(cands):
            if cands & ~cone(c) == 0:
                return c
        raise LatticeError(what, witness, f"no {what} for {witness}")

    @property
    def size(self) -> int:
        return self.poset.size

    def le(self, a, b) -> bool:
        return self.poset.le(a, b)

    def join_all(self, items) -> int:
        return reduce(lambda a, b: self.join[a][b], items, self.bottom)

    def meet_all(self, items) -> int:
        return reduce(lambda a, b: self.meet[a][b], items, self.top)

    def distributivity_witness(self):
        n = self.size
        for a, b, c in itertools.product(range(n), repeat=3):
            if self.meet[a][self.join[b][c]] != self.join[self.meet[a][b]][self.meet[a][c]]:
                return (a, b, c)
        return None

    def is_distributive(self) -> bool:
        return self.distributivity_witness() is None


@dataclass(frozen=True)
class FiniteLocale(FiniteLattice):
    """A finite distributive lattice with its Heyting implication."""
    imp: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        super().__post_init__()
        w = self.distributivity_witness()
        if w is not None:
            raise LatticeError("distributivity", w, f"a ∧ (b ∨ c) ≠ (a ∧ b) ∨ (a ∧ c) at {w}")
        n = self.size
        imp = tuple(tuple(self.join_all(c for c in range(n) if self.le(self.meet[a][c], b))
                          for b in range(n)) for a in range(n))
        object.__setattr__(self, "imp", imp)

    def neg(self, a: int) -> int:
        return self.imp[a][self.bottom]


def lattice_from_pairs(elements, pairs) -> FiniteLattice:
    return FiniteLattice(FinitePoset.from_pairs(elements, pairs))


def locale_from_pairs(elements, pairs) -> FiniteLocale:
    return FiniteLocale(FinitePoset.from_pairs(elements, pairs))


def validate_locale(l: FiniteLocale) -> None:
    """Re-check the lattice and Heyting laws exhaustively; raise ``LatticeError`` on failure."""
    n = l.size
    le = l.le
    for a, b in itertools.product(range(n), repeat=2):
        m, j = l.meet[a][b], l.join[a][b]
        if not (le(m, a) and le(m, b) and le(a, j) and le(b, j)):
            raise LatticeError("bounds", (a, b), f"meet/join of {a}, {b} are not bounds")
        for c in range(n):
            if le(c, a) and le(c, b) and not le(c, m):
                raise LatticeError("meet", (a, b, c), "meet is not greatest")
            if le(a, c) and le(b, c) and not le(j, c):
                raise LatticeError("join", (a, b, c), "join is not least")
            if le(l.meet[a][c], b) != le(c, l.imp[a][b]):
                raise LatticeError("heyting", (a, b, c), "a ∧ c ≤ b is not equivalent to c ≤ a ⇒ b")
    w = l.distributivity_witness()
    if w is not None:
        raise LatticeError("distributivity", w, "not distributive")


# -- operators -------------------------------------------------------------

OPERATOR_FLAGS = ("monotone", "inflationary", "idempotent", "prenucleus", "multiplicative",
                  "mult_prenucleus", "dense", "nucleus")


def classify_operator(l: FiniteLattice, m) -> dict:
    n = l.size
    pairs = list(itertools.product(range(n), repeat=2))
    monotone = all(l.le(m[a], m[b]) for a, b in pairs if l.le(a, b))
    inflationary = all(l.le(a, m[a]) for a in range(n))
    idempotent = all(m[m[a]] == m[a] for a in range(n))
    strength = all(l.le(l.meet[m[a]][b], m[l.meet[a][b]]) for a, b in pairs)
    multiplicative = m[l.top] == l.top and all(m[l.meet[a][b]] == l.meet[m[a]][m[b]] for a, b in pairs)
    prenucleus = monotone and inflationary and strength
    return {
        "monotone": monotone,
        "inflationary": inflationary,
        "idempotent": idempotent,
        "prenucleus": prenucleus,
        "multiplicative": multiplicative,
        "mult_prenucleus": prenucleus and multiplicative,
        "dense": m[l.bottom] == l.bottom,
        "nucleus": inflationary and idempotent and multiplicative,
    }


def alt_mult_holds(l: FiniteLattice, m) -> bool | None:
    """For monotone, finite-meet-preserving ``m``: is ``inflationary`` equivalent to
    ``a ∧ m b ≤ m (a ∧ b)``?  ``None`` when ``m`` is outside the hypothesis."""
    flags = classify_operator(l, m)
    if not (flags["monotone"] and flags["multiplicative"]):
        return None
    n = l.size
    second = all(l.le(l.meet[a][m[b]], m[l.meet[a][b]])
                 for a, b in itertools.product(range(n), repeat=2))
    return flags["inflationary"] == second


def monotone_maps(l: FiniteLattice):
    """Every monotone operator, in lexicographic order of the image tuple."""
    n = l.size
    below = [[b for b in range(a) if l.le(b, a)] for a in range(n)]
    above = [[b for b in range(a) if l.le(a, b)] for a in range(n)]
    img = [0] * n

    def go(i):
        if i == n:
            yield tuple(img)
            return
        for v in range(n):
            if all(l.le(img[b], v) for b in below[i]) and all(l.le(v, img[b]) for b in above[i]):
                img[i] = v
                yield from go(i + 1)

    yield from go(0)


def identity_op(l: FiniteLattice):
    return tuple(range(l.size))


def double_negation(l: FiniteLocale):
    return tuple(l.neg(l.neg(a)) for a in range(l.size))


# -- the S_L construction --------------------------------------------------

def build_SL(l: FiniteLocale, m=None) -> CoverSystem:
    """Carrier of ``l`` with the order reversed; ``x`` is covered by ``C`` iff ``⋁C = x``;
    with ``m``, ``x R y`` iff ``x ≤ m y``.  Only subsets of ``{y | y ≤ x}`` can join to
    ``x``, so the covers are enumerated there."""
    n = l.size
    if m is not None and len(m) != n:
        raise ValueError("operator has the wrong length")
    rev = FinitePoset(l.poset.elements, frozenset((b, a) for a, b in l.poset.leq))
    covers = []
    for x in range(n):
        below = bits(l.poset.down(x))
        cs = []
        for r in range(len(below) + 1):
            for combo in itertools.combinations(below, r):
                if l.join_all(combo) == x:
                    cs.append(mask_of(combo))
        covers.append(tuple(cs))
    R = None
    if m is not None:
        R = frozenset((x, y) for x in range(n) for y in range(n) if l.le(x, m[y]))
    return CoverSystem(rev, tuple(covers), R)


def principal(l: FiniteLattice, x: int) -> int:
    """The proposition of ``S_L`` attached to ``x``: everything below ``x`` in ``l``."""
    return l.poset.down(x)


@dataclass
class IsoReport:
    ok: bool
    table: list  # (element, proposition as element list)
    failures: list = field(default_factory=list)

    def lines(self) -> list[str]:
        out = [f"{e} -> {{{', '.join(map(str, ps))}}}" for e, ps in self.table]
        out += [f"FAIL {f}" for f in self.failures]
        out.append("isomorphism: " + ("ok" if self.ok else "FAILED"))
        return out


def representation_iso(l: FiniteLocale, m=None, guard: int = DEFAULT_SUBSET_GUARD) -> IsoReport:
    """Check that ``x ↦ (x]`` is an isomorphism from ``l`` onto ``Prop(S_L)`` that
    preserves meets, joins, bounds and implication, and (with ``m``) turns ``m``
    into ``<R_m>``."""
    s = build_SL(l, m)
    n = l.size
    p = s.poset
    fails = []
    props = propositions(s, guard)
    image = [principal(l, x) for x in range(n)]
    table = [(l.poset.elements[x], p.show(image[x])) for x in range(n)]
    if len(set(image)) != n:
        fails.append("not injective")
    if sorted(image) != props:
        missing = [p.show(X) for X in props if X not in image]
        fails.append(f"not onto Prop(S_L): missing {missing}")
    for x in range(n):
        if j_op(s, image[x]) != image[x]:
            fails.append(f"({x}] is not localised")
    full = p.full
    if image[l.top] != full:
        fails.append("top not preserved")
    if image[l.bottom] != j_op(s, 0):
        fails.append("bottom not preserved")
    for a, b in itertools.product(range(n), repeat=2):
        A, B = image[a], image[b]
        if image[l.meet[a][b]] != A & B:
            fails.append(f"meet not preserved at {a}, {b}")
        if image[l.join[a][b]] != j_op(s, A | B):
            fails.append(f"join not preserved at {a}, {b}")
        if image[l.imp[a][b]] != heyting_arrow(p, A, B):
            fails.append(f"implication not preserved at {a}, {b}")
    if m is not None:
        for a in range(n):
            if image[m[a]] != diamond(s, image[a]):
                fails.append(f"(m {a}] != <R_m>({a}]")
    return IsoReport(not fails, table, fails)


# -- Dedekind-MacNeille completion -----------------------------------------

@dataclass
class Completion:
    lattice: FiniteLattice
    cuts: list  # cut k is (lower set mask, upper set mask) over the original poset
    embed: tuple  # original element index -> lattice element index


def _lower_bounds(p: FinitePoset, X: int) -> int:
    out = p.full
    for x in bits(X):
        out &= p.down(x)
    return out


def _upper_bounds(p: FinitePoset, X: int) -> int:
    out = p.full
    for x in bits(X):
        out &= p.up(x)
    return out


def dedekind_macneille(p: FinitePoset, guard: int = DEFAULT_SUBSET_GUARD) -> Completion:
    """Completion by cuts ``(A, B)`` with ``A`` the lower bounds of ``B`` and ``B`` the upper bounds of ``A``."""
    if 1 << p.size > guard:
        raise SizeGuardExceeded("too many subsets for the completion")
    p.validate()
    lowers = sorted({_lower_bounds(p, _upper_bounds(p, X)) for X in range(1 << p.size)},
                    key=lambda A: (bin(A).count("1"), A))
    cuts = [(A, _upper_bounds(p, A)) for A in lowers]
    index = {A: k for k, (A, _) in enumerate(cuts)}
    order = [(i, k) for i, (A, _) in enumerate(cuts) for k, (B, _) in enumerate(cuts) if A & ~B == 0]
    names = [tuple(p.show(A)) for A, _ in cuts]
    lat = FiniteLattice(FinitePoset(tuple(names), frozenset(order)))
    embed = tuple(index[p.down(x)] for x in range(p.size))
    return Completion(lat, cuts, embed)


def is_join_meet_dense(c: Completion) -> bool:
    """Every element is a join of embedded elements and a meet of embedded elements."""
    l = c.lattice
    emb = set(c.embed)
    for a in range(l.size):
        if l.join_all(e for e in emb if l.le(e, a)) != a:
            return False
        if l.meet_all(e for e in emb if l.le(a, e)) != a:
            return False
    return True


def extend_lower(l: FiniteLattice, sub, f) -> tuple:
    """``f°(a) = ⋁{f(x) | x ∈ sub, x ≤ a}``; ``f`` maps each element of ``sub`` into ``l``."""
    _check_monotone_on(l, sub, f)
    return tuple(l.join_all(f[x] for x in sub if l.le(x, a)) for a in range(l.size))


def extend_upper(l: FiniteLattice, sub, f) -> tuple:
    """``f•(a) = ⋀{f(x) | x ∈ sub, a ≤ x}``."""
    _check_monotone_on(l, sub, f)
    return tuple(l.meet_all(f[x] for x in sub if l.le(a, x)) for a in range(l.size))


def _check_monotone_on(l, sub, f):
    for x in sub:
        for y in sub:
            if l.le(x, y) and not l.le(f[x], f[y]):
                raise ValueError(f"map is not monotone: {x} <= {y} but f({x}) > f({y})")
