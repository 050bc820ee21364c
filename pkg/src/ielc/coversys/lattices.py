"""Enumeration of small finite distributive lattices up to isomorphism.

The main route is Birkhoff duality: a finite distributive lattice is the
lattice of down-sets of its poset of join-irreducibles, so it suffices to
list posets up to isomorphism and keep those with the right number of
down-sets.  ``distributive_lattices_bruteforce`` is an independent check
that searches bounded posets directly.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

from .locale import FiniteLattice, FiniteLocale, LatticeError
from .poset import FinitePoset, bits, reflexive_transitive_closure


def _naturally_labelled_posets(k: int):
    """Posets on ``0..k-1`` where ``i <= j`` implies ``i <= j`` numerically; every
    poset has such a labelling (a linear extension)."""
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    for chosen in range(1 << len(pairs)):
        rel = {(i, i) for i in range(k)} | {pairs[t] for t in range(len(pairs)) if chosen >> t & 1}
        if all((a, c) in rel for (a, b) in rel for (b2, c) in rel if b == b2):
            yield frozenset(rel)


def _canonical(rel, k: int):
    return min(tuple(sorted((perm[a], perm[b]) for a, b in rel))
               for perm in itertools.permutations(range(k)))


@lru_cache(maxsize=None)
def posets_up_to_iso(k: int) -> tuple:
    seen = {}
    for rel in _naturally_labelled_posets(k):
        seen.setdefault(_canonical(rel, k), rel)
    return tuple(FinitePoset(tuple(range(k)), rel) for _, rel in sorted(seen.items()))


def down_set_lattice(p: FinitePoset) -> FiniteLocale:
    """The lattice of down-sets of ``p`` ordered by inclusion."""
    downs = [m for m in range(1 << p.size) if all(p.down(i) & ~m == 0 for i in bits(m))]
    downs.sort(key=lambda m: (bin(m).count("1"), m))
    order = frozenset((i, j) for i, a in enumerate(downs) for j, b in enumerate(downs) if a & ~b == 0)
    names = tuple("{" + ",".join(map(str, bits(m))) + "}" for m in downs)
    return FiniteLocale(FinitePoset(names, order))


def _count_down_sets(p: FinitePoset) -> int:
    return sum(1 for m in range(1 << p.size) if all(p.down(i) & ~m == 0 for i in bits(m)))


@lru_cache(maxsize=None)
def distributive_lattices(n: int) -> tuple:
    """All distributive lattices with ``n`` elements, one per isomorphism class."""
    if n < 1:
        return ()
    out = []
    for k in range(n):  # a lattice with k join-irreducibles has at least k + 1 elements
        for p in posets_up_to_iso(k):
            if _count_down_sets(p) == n:
                out.append(down_set_lattice(p))
    return tuple(out)


def all_distributive_lattices(max_size: int):
    for n in range(1, max_size + 1):
        yield from distributive_lattices(n)


def lattice_canonical_form(l: FiniteLattice):
    n = l.size
    return min(tuple(sorted((perm[a], perm[b]) for a, b in l.poset.leq))
               for perm in itertools.permutations(range(n)))


def distributive_lattices_bruteforce(n: int) -> list:
    """Independent enumeration: bounded posets with ``n`` elements that are
    distributive lattices, deduplicated by brute-force isomorphism."""
    if n == 1:
        return [FiniteLattice(FinitePoset((0,), frozenset({(0, 0)})))]
    mids = list(range(1, n - 1))
    pairs = [(a, b) for a in mids for b in mids if a < b]
    found = {}
    for chosen in range(1 << len(pairs)):
        gen = {pairs[t] for t in range(len(pairs)) if chosen >> t & 1}
        gen |= {(0, x) for x in range(n)} | {(x, n - 1) for x in range(n)}
        rel = reflexive_transitive_closure(n, gen)
        if any((a, b) in rel and a > b for a, b in rel if a in mids and b in mids):
            continue
        try:
            lat = FiniteLattice(FinitePoset(tuple(range(n)), rel))
        except LatticeError:
            continue
        if not lat.is_distributive():
            continue
        found.setdefault(lattice_canonical_form(lat), lat)
    return [found[k] for k in sorted(found)]


# -- a few named examples --------------------------------------------------

def chain(n: int) -> FiniteLocale:
    return FiniteLocale(FinitePoset.from_pairs(tuple(range(n)), [(i, i + 1) for i in range(n - 1)]))


def diamond_lattice() -> FiniteLocale:
    """Four elements: bottom, two incomparable atoms, top."""
    return FiniteLocale(FinitePoset.from_pairs(("0", "a", "b", "1"), [(0, 1), (0, 2), (1, 3), (2, 3)]))
