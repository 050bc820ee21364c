"""Cover systems, the j-operator, propositions and the modal conditions.

A cover relation is stored extensionally: for each point ``x`` the list of
its covers, each a bitmask.  Every condition is decided by exhaustive
search; a failed check yields a ``Witness`` naming the condition and the
points or sets involved.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .poset import DEFAULT_SUBSET_GUARD, FinitePoset, SizeGuardExceeded, bits, up_sets

FLAGS = ("cover", "localic", "strict", "modal", "prenuclear", "mult_prenuclear", "iel")


@dataclass(frozen=True)
class Witness:
    condition: str
    data: tuple

    def __str__(self):
        return f"{self.condition}: {self.data}"


class CoverSystemError(ValueError):
    def __init__(self, witness: Witness):
        super().__init__(str(witness))
        self.witness = witness


@dataclass(frozen=True)
class CoverSystem:
    poset: FinitePoset
    covers: tuple  # covers[x] = sorted tuple of bitmasks C with x |> C
    R: frozenset | None = None  # pairs (x, y) meaning x R y
    _succ: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.poset.size
        if len(self.covers) != n:
            raise ValueError("need one cover list per point")
        object.__setattr__(self, "covers", tuple(tuple(sorted(set(cs))) for cs in self.covers))
        for cs in self.covers:
            for c in cs:
                if c >> n:
                    raise ValueError(f"cover {c:b} mentions points outside the carrier")
        if self.R is not None:
            R = frozenset(tuple(p) for p in self.R)
            for a, b in R:
                if not (0 <= a < n and 0 <= b < n):
                    raise ValueError(f"R pair ({a}, {b}) out of range")
            object.__setattr__(self, "R", R)
            succ = [0] * n
            for a, b in R:
                succ[a] |= 1 << b
            object.__setattr__(self, "_succ", tuple(succ))
        else:
            object.__setattr__(self, "_succ", None)

    @classmethod
    def from_relation(cls, poset: FinitePoset, pairs, R=None) -> "CoverSystem":
        """Build from ``(x, C)`` pairs, ``C`` an iterable of point indices or a bitmask."""
        covers = [set() for _ in range(poset.size)]
        for x, c in pairs:
            covers[x].add(c if isinstance(c, int) else sum(1 << i for i in c))
        return cls(poset, tuple(tuple(cs) for cs in covers), R)

    @property
    def size(self) -> int:
        return self.poset.size

    def pairs(self):
        for x, cs in enumerate(self.covers):
            for c in cs:
                yield x, c

    def succ(self, x: int) -> int:
        if self._succ is None:
            raise ValueError("cover system has no relation R")
        return self._succ[x]

    def with_R(self, R) -> "CoverSystem":
        return CoverSystem(self.poset, self.covers, R)


def j_op(s: CoverSystem, X: int) -> int:
    """Points with some cover inside ``X``."""
    out = 0
    for x, cs in enumerate(s.covers):
        if any(c & ~X == 0 for c in cs):
            out |= 1 << x
    return out


def diamond(s: CoverSystem, A: int) -> int:
    """``<R>A``: points with an R-successor in ``A``."""
    if s.R is None:
        raise ValueError("cover system has no relation R")
    return sum(1 << x for x in range(s.size) if s._succ[x] & A)


def propositions(s: CoverSystem, guard: int = DEFAULT_SUBSET_GUARD) -> list[int]:
    """Localised up-sets, ascending by bitmask."""
    return [X for X in up_sets(s.poset, guard) if j_op(s, X) & ~X == 0]


def heyting_arrow(p: FinitePoset, A: int, B: int) -> int:
    """Implication in the locale of up-sets: points whose whole cone inside ``A`` lies in ``B``."""
    return sum(1 << x for x in range(p.size) if p.up(x) & A & ~B == 0)


# -- cover-system axioms ---------------------------------------------------

def _unions(s: CoverSystem, C: int) -> set[int]:
    """Every union of one chosen cover per point of ``C``."""
    acc = {0}
    for y in bits(C):
        acc = {u | cy for u in acc for cy in s.covers[y]}
        if not acc:
            break
    return acc


def check_existence(s: CoverSystem):
    for x in range(s.size):
        if not any(c & ~s.poset.up(x) == 0 for c in s.covers[x]):
            return Witness("existence", (x,))
    return None


def check_transitivity(s: CoverSystem):
    for x, C in s.pairs():
        have = set(s.covers[x])
        for u in sorted(_unions(s, C)):
            if u not in have:
                return Witness("transitivity", (x, bits(C), bits(u)))
    return None


def check_refinement(s: CoverSystem):
    p = s.poset
    for x, C in s.pairs():
        upC = p.up_closure(C)
        for y in bits(p.up(x)):
            if not any(c & ~upC == 0 for c in s.covers[y]):
                return Witness("refinement", (x, y, bits(C)))
    return None


def check_localic(s: CoverSystem):
    p = s.poset
    for x, C in s.pairs():
        bound = p.up_closure(C) & p.up(x)
        if not any(c & ~bound == 0 for c in s.covers[x]):
            return Witness("localic", (x, bits(C)))
    return None


def check_strict(s: CoverSystem):
    for x, C in s.pairs():
        if C & ~s.poset.up(x):
            return Witness("strict", (x, bits(C)))
    return None


# -- modal conditions ------------------------------------------------------

def check_confluence(s: CoverSystem):
    p = s.poset
    for (x, z) in sorted(s.R):
        for y in bits(p.up(x)):
            if not s.succ(y) & p.up(z):
                return Witness("confluence", (x, y, z))
    return None


def check_modal_localisation(s: CoverSystem, guard: int = DEFAULT_SUBSET_GUARD):
    """For every subset ``A``: ``j<R>A ⊆ <R>jA``."""
    if 1 << s.size > guard:
        raise SizeGuardExceeded("too many subsets for the modal localisation check")
    for A in range(1 << s.size):
        lhs = j_op(s, diamond(s, A))
        rhs = diamond(s, j_op(s, A))
        if lhs & ~rhs:
            x = bits(lhs & ~rhs)[0]
            return Witness("modal-localisation", (x, bits(A)))
    return None


def check_reflexive_R(s: CoverSystem):
    for x in range(s.size):
        if not s.succ(x) >> x & 1:
            return Witness("R-reflexive", (x,))
    return None


def check_serial_R(s: CoverSystem):
    for x in range(s.size):
        if not s.succ(x):
            return Witness("R-serial", (x,))
    return None


def check_zigzag(s: CoverSystem):
    """``x R y`` implies some ``z`` above both ``x`` and ``y`` with ``x R z``."""
    p = s.poset
    for (x, y) in sorted(s.R):
        if not p.up(x) & p.up(y) & s.succ(x):
            return Witness("prenuclear-zigzag", (x, y))
    return None


def check_directed(s: CoverSystem, variant: bool = False):
    """``x R y`` and ``x R z`` give some ``w`` with ``x R w`` in a common cone.

    The cone is ``↑x ∩ ↑y`` by default, or ``↑y ∩ ↑z``
    with ``variant``.
    """
    p = s.poset
    for x in range(s.size):
        rs = bits(s.succ(x))
        for y in rs:
            for z in rs:
                cone = p.up(y) & (p.up(z) if variant else p.up(x))
                if not cone & s.succ(x):
                    return Witness("R-directed" + ("-variant" if variant else ""), (x, y, z))
    return None


def check_iel(s: CoverSystem):
    empty_covered = sum(1 << x for x in range(s.size) if 0 in s.covers[x])
    for (x, y) in sorted(s.R):
        if empty_covered >> y & 1 and not empty_covered >> x & 1:
            return Witness("iel-empty-cover", (x, y))
    return None


@dataclass
class Classification:
    flags: dict
    witnesses: dict  # flag -> first Witness explaining a False flag

    def __getitem__(self, flag):
        return self.flags[flag]

    def lines(self) -> list[str]:
        out = []
        for f in FLAGS:
            w = self.witnesses.get(f)
            out.append(f"{f}={'true' if self.flags[f] else 'false'}" + (f"  ({w})" if w else ""))
        return out


def _first(*checks):
    for c in checks:
        w = c()
        if w is not None:
            return w
    return None


def classify_cover_system(s: CoverSystem, variant: bool = False) -> Classification:
    """Decide every flag; ``variant`` selects the ``↑y ∩ ↑z`` reading of R-directedness."""
    flags, wit = {}, {}

    def record(name, witness, prereq=True, why=None):
        ok = prereq and witness is None
        flags[name] = ok
        if not ok:
            wit[name] = witness if prereq else why
        return ok

    w = _first(lambda: check_existence(s), lambda: check_transitivity(s), lambda: check_refinement(s))
    cover = record("cover", w)
    record("localic", check_localic(s), cover, Witness("requires", ("cover",)))
    strict = record("strict", check_strict(s), cover, Witness("requires", ("cover",)))
    strict_localic = strict and flags["localic"]
    if s.R is None:
        for f in ("modal", "prenuclear", "mult_prenuclear", "iel"):
            record(f, None, False, Witness("requires", ("R",)))
        return Classification(flags, wit)
    modal = record("modal", _first(lambda: check_confluence(s), lambda: check_modal_localisation(s)),
                   strict_localic, Witness("requires", ("strict", "localic")))
    record("prenuclear", _first(lambda: check_reflexive_R(s), lambda: check_zigzag(s)),
           modal, Witness("requires", ("modal",)))
    mult = record("mult_prenuclear",
                  _first(lambda: check_serial_R(s), lambda: check_directed(s, variant),
                         lambda: check_zigzag(s)),
                  modal, Witness("requires", ("modal",)))
    record("iel", check_iel(s), mult, Witness("requires", ("mult_prenuclear",)))
    return Classification(flags, wit)


def validate_cover_system(s: CoverSystem) -> None:
    w = _first(lambda: check_existence(s), lambda: check_transitivity(s), lambda: check_refinement(s))
    if w is not None:
        raise CoverSystemError(w)
