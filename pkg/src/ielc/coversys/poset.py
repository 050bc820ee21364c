"""Finite posets with subsets encoded as bitmasks (bit i = element i)."""
from __future__ import annotations

from dataclasses import dataclass, field

DEFAULT_SUBSET_GUARD = 1 << 20


class PosetError(ValueError):
    def __init__(self, condition: str, witness: tuple, message: str):
        super().__init__(message)
        self.condition = condition
        self.witness = witness


class SizeGuardExceeded(RuntimeError):
    pass


def bits(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def mask_of(items) -> int:
    out = 0
    for i in items:
        out |= 1 << i
    return out


def reflexive_transitive_closure(n: int, pairs) -> frozenset:
    rel = {(i, i) for i in range(n)} | set(pairs)
    changed = True
    while changed:
        changed = False
        for (a, b) in list(rel):
            for c in range(n):
                if (b, c) in rel and (a, c) not in rel:
                    rel.add((a, c))
                    changed = True
    return frozenset(rel)


@dataclass(frozen=True)
class FinitePoset:
    elements: tuple
    leq: frozenset  # index pairs (i, j) meaning elements[i] <= elements[j]
    _up: tuple = field(init=False, repr=False, compare=False)
    _down: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "leq", frozenset(tuple(p) for p in self.leq))
        n = len(self.elements)
        for a, b in self.leq:
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"order pair ({a}, {b}) out of range")
        object.__setattr__(self, "_up", tuple(mask_of(b for (a, b) in self.leq if a == i) for i in range(n)))
        object.__setattr__(self, "_down", tuple(mask_of(a for (a, b) in self.leq if b == i) for i in range(n)))

    @classmethod
    def from_pairs(cls, elements, pairs) -> "FinitePoset":
        """Order generated by ``pairs`` (reflexive-transitive closure)."""
        return cls(tuple(elements), reflexive_transitive_closure(len(elements), pairs))

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    def le(self, a: int, b: int) -> bool:
        return (a, b) in self.leq

    def up(self, i: int) -> int:
        return self._up[i]

    def down(self, i: int) -> int:
        return self._down[i]

    def up_closure(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= self._up[i]
        return out

    def is_up(self, mask: int) -> bool:
        return self.up_closure(mask) == mask

    def validate(self) -> None:
        n = self.size
        for i in range(n):
            if (i, i) not in self.leq:
                raise PosetError("reflexivity", (i,), f"not {i} <= {i}")
        for a, b in sorted(self.leq):
            if a != b and (b, a) in self.leq:
                raise PosetError("antisymmetry", (a, b), f"{a} <= {b} <= {a}")
            for c in bits(self._up[b]):
                if (a, c) not in self.leq:
                    raise PosetError("transitivity", (a, b, c), f"{a} <= {b} <= {c} but not {a} <= {c}")

    def is_valid(self) -> bool:
        try:
            self.validate()
        except PosetError:
            return False
        return True

    def dual(self) -> "FinitePoset":
        return FinitePoset(self.elements, frozenset((b, a) for a, b in self.leq))

    def show(self, mask: int) -> list:
        return [self.elements[i] for i in bits(mask)]


def up_sets(p: FinitePoset, guard: int = DEFAULT_SUBSET_GUARD) -> list[int]:
    """All upward-closed subsets as bitmasks, ascending."""
    if 1 << p.size > guard:
        raise SizeGuardExceeded(f"{1 << p.size} subsets exceed the guard of {guard}")
    return [m for m in range(1 << p.size) if p.is_up(m)]
