"""Generators of finite cover systems for exhaustive and randomized checks.

Random strictly localic systems are built by seeding each point with the
cover ``{x}`` plus a few random subsets of its cone, then repeatedly closing
under transitivity and repairing refinement (a missing ``y``-cover for an
``x``-cover ``C`` is supplied as ``↑C ∩ ↑y``) until nothing changes.  The
results are re-verified by ``classify_cover_system`` independently of the
construction.
"""
from __future__ import annotations

import itertools
import random

from .lattices import all_distributive_lattices
from .locale import build_SL, classify_operator, monotone_maps
from .poset import FinitePoset, bits, reflexive_transitive_closure
from .system import CoverSystem, _unions, classify_cover_system


def random_poset(rng: random.Random, n: int, density: float = 0.4) -> FinitePoset:
    perm = list(range(n))
    rng.shuffle(perm)
    gen = [(perm[i], perm[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    return FinitePoset(tuple(range(n)), reflexive_transitive_closure(n, gen))


def close_covers(p: FinitePoset, covers: list[set]) -> list[set]:
    """Close under transitivity and repair refinement, keeping every cover inside its cone."""
    changed = True
    while changed:
        changed = False
        tmp = CoverSystem(p, tuple(tuple(cs) for cs in covers))
        for x in range(p.size):
            for C in list(covers[x]):
                for u in _unions(tmp, C):
                    if u not in covers[x]:
                        covers[x].add(u)
                        changed = True
        for x in range(p.size):
            for C in list(covers[x]):
                upC = p.up_closure(C)
                for y in bits(p.up(x)):
                    if not any(c & ~upC == 0 for c in covers[y]):
                        covers[y].add(upC & p.up(y))
                        changed = True
    return covers


def random_strict_localic(rng: random.Random, n: int, extra: int = 2,
                          empty_prob: float = 0.15) -> CoverSystem:
    p = random_poset(rng, n)
    covers = []
    for x in range(n):
        cone = p.up(x)
        cs = {1 << x}
        for _ in range(rng.randint(0, extra)):
            cs.add(rng.randint(0, cone) & cone)
        if rng.random() < empty_prob:
            cs.add(0)
        covers.append(cs)
    covers = close_covers(p, covers)
    return CoverSystem(p, tuple(tuple(cs) for cs in covers))


def strict_localic_systems(n: int):
    """Every strictly localic system on every labelled poset with ``n`` points
    (feasible for ``n <= 2``)."""
    from ..kripke import posets
    for leq in posets(n):
        p = FinitePoset(tuple(range(n)), leq)
        options = [[m for m in range(p.up(x) + 1) if m & ~p.up(x) == 0] for x in range(n)]
        per_point = [list(_subsets(opts)) for opts in options]
        for choice in itertools.product(*per_point):
            s = CoverSystem(p, tuple(choice))
            c = classify_cover_system(s)
            if c["cover"] and c["strict"] and c["localic"]:
                yield s


def _subsets(items):
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)


def random_relation(rng: random.Random, n: int, density: float = 0.35) -> frozenset:
    return frozenset((a, b) for a in range(n) for b in range(n) if rng.random() < density)


def repair_R(s: CoverSystem, R, reflexive: bool = False, serial: bool = False) -> frozenset:
    """Push ``R`` towards the modal conditions: add reflexive or serial pairs on
    request, then add ``y R z`` for confluence failures and drop pairs that
    cannot satisfy the zig-zag condition.  The result is not guaranteed modal."""
    p = s.poset
    n = s.size
    R = set(R)
    if reflexive:
        R |= {(x, x) for x in range(n)}
    if serial:
        for x in range(n):
            if not any(a == x for a, _ in R):
                R.add((x, x))
    changed = True
    while changed:
        changed = False
        for (x, z) in sorted(R):
            for y in bits(p.up(x)):
                if not any((y, w) in R for w in bits(p.up(z))):
                    R.add((y, z))
                    changed = True
    return frozenset(R)


def random_modal_systems(rng: random.Random, count: int, max_points: int = 5, tries: int = 400,
                         want: str = "prenuclear", variant: bool = False):
    """Random strictly localic systems whose (repaired) random R passes ``want``.

    Sizes cycle through ``1..max_points`` so that large systems, which are
    rejected far more often, are not crowded out by one- and two-point ones.
    A size slot that exhausts ``tries`` attempts is skipped.
    """
    out = []
    for k in range(count):
        n = k % max_points + 1
        for _ in range(tries):
            base = random_strict_localic(rng, n)
            R = repair_R(base, random_relation(rng, n), reflexive=(want == "prenuclear"),
                         serial=(want != "prenuclear"))
            s = base.with_R(R)
            if classify_cover_system(s, variant)[want]:
                out.append(s)
                break
    return out


def sl_systems(max_size: int, require: str | None = None):
    """``S_L`` with ``R_m`` for every distributive lattice up to ``max_size`` and every
    monotone ``m``; ``require`` filters on an operator flag."""
    for l in all_distributive_lattices(max_size):
        for m in monotone_maps(l):
            if require is None or classify_operator(l, m)[require]:
                yield l, m, build_SL(l, m)
