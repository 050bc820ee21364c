"""Finite Kripke semantics for IEL- and IEL.

A frame is ``<W, <=, E>`` with ``<=`` a partial order on ``W = {0..n-1}``,
``E(w)`` contained in the up-set of ``w``, and ``E(u) ⊆ E(w)`` whenever
``w <= u``.  IEL frames are additionally serial.  ``O phi`` holds at ``w``
when ``phi`` holds at every ``E``-successor of ``w``; the remaining clauses
are the usual intuitionistic ones.  Valuations send letters to up-sets.

Sets of worlds are bitmasks throughout: bit ``w`` stands for world ``w``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

from .formula import (
    And, Bottom, Circ, Formula, Implies, Letter, Or, letters, is_propositional,
)

IEL_MINUS = "iel-"
IEL = "iel"
LOGICS = (IEL_MINUS, IEL)

DEFAULT_GUARD = 10**7


class FrameError(ValueError):
    """A frame condition fails; ``condition`` names it and ``witness`` shows where."""

    def __init__(self, condition: str, witness: tuple, message: str):
        super().__init__(message)
        self.condition = condition
        self.witness = witness


class ResourceGuardExceeded(RuntimeError):
    def __init__(self, needed: int, guard: int):
        super().__init__(f"search needs {needed} evaluations, above the guard of {guard}")
        self.needed = needed
        self.guard = guard


def _bits(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def _mask(worlds) -> int:
    out = 0
    for w in worlds:
        out |= 1 << w
    return out


@dataclass(frozen=True)
class Frame:
    size: int
    leq: frozenset  # pairs (w, u) with w <= u
    E: frozenset    # pairs (w, u) with u in E(w)

    def __post_init__(self):
        object.__setattr__(self, "leq", frozenset(self.leq))
        object.__setattr__(self, "E", frozenset(self.E))
        for w, u in self.leq | self.E:
            if not (0 <= w < self.size and 0 <= u < self.size):
                raise ValueError(f"pair ({w}, {u}) mentions a world outside 0..{self.size - 1}")

    @property
    def worlds(self) -> range:
        return range(self.size)

    def up(self, w: int) -> int:
        return _mask(u for (v, u) in self.leq if v == w)

    def succ(self, w: int) -> int:
        return _mask(u for (v, u) in self.E if v == w)

    def encoding(self) -> tuple[int, int]:
        """Integer codes of ``<=`` and ``E`` (bit ``w*n+u`` for the pair ``(w, u)``)."""
        n = self.size
        return (sum(1 << (w * n + u) for w, u in self.leq),
                sum(1 << (w * n + u) for w, u in self.E))


def validate_frame(f: Frame, logic: str = IEL_MINUS) -> None:
    """Raise ``FrameError`` on the first violated condition."""
    if logic not in LOGICS:
        raise ValueError(f"unknown logic {logic!r}")
    W = f.worlds
    for w in W:
        if (w, w) not in f.leq:
            raise FrameError("reflexivity", (w,), f"not {w} <= {w}")
    for (a, b) in sorted(f.leq):
        if a != b and (b, a) in f.leq:
            raise FrameError("antisymmetry", (a, b), f"{a} <= {b} and {b} <= {a}")
    for (a, b) in sorted(f.leq):
        for c in W:
            if (b, c) in f.leq and (a, c) not in f.leq:
                raise FrameError("transitivity", (a, b, c), f"{a} <= {b} <= {c} but not {a} <= {c}")
    for (w, u) in sorted(f.E):
        if (w, u) not in f.leq:
            raise FrameError("E-inside-up", (w, u), f"{u} in E({w}) but not {w} <= {u}")
    for (w, u) in sorted(f.leq):
        for v in W:
            if (u, v) in f.E and (w, v) not in f.E:
                raise FrameError("E-antitone", (w, u, v),
                                 f"{w} <= {u} and {v} in E({u}) but {v} not in E({w})")
    if logic == IEL:
        for w in W:
            if not any(a == w for a, _ in f.E):
                raise FrameError("seriality", (w,), f"E({w}) is empty")


def frame_ok(f: Frame, logic: str = IEL_MINUS) -> bool:
    try:
        validate_frame(f, logic)
    except FrameError:
        return False
    return True


def up_sets(f: Frame) -> list[int]:
    """All up-sets of the frame, as bitmasks in ascending order."""
    ups = [f.up(w) for w in f.worlds]
    return [m for m in range(1 << f.size)
            if all(ups[w] & ~m == 0 for w in _bits(m))]


@dataclass(frozen=True)
class Model:
    frame: Frame
    valuation: dict = field(hash=False)  # letter -> frozenset of worlds

    def __post_init__(self):
        object.__setattr__(self, "valuation",
                           {p: frozenset(ws) for p, ws in self.valuation.items()})

    def check(self):
        """The valuation must send every letter to an up-set."""
        for p, ws in self.valuation.items():
            for w in ws:
                if not 0 <= w < self.frame.size:
                    raise ValueError(f"valuation of {p} mentions unknown world {w}")
                for (a, b) in self.frame.leq:
                    if a == w and b not in ws:
                        raise ValueError(f"valuation of {p} is not upward closed: {w} <= {b}")


class _Tables:
    """Per-frame lookup tables for the Heyting arrow and the box over E."""

    def __init__(self, f: Frame):
        n = f.size
        self.full = (1 << n) - 1
        ups = [f.up(w) for w in range(n)]
        succ = [f.succ(w) for w in range(n)]
        self.ups = ups
        self.succ = succ
        size = 1 << n
        # box[A] = {w | E(w) ⊆ A}
        self.box = [_mask(w for w in range(n) if succ[w] & ~a == 0) for a in range(size)]
        # imp[A][B] = {w | up(w) ∩ A ⊆ B}
        self.imp = [[_mask(w for w in range(n) if ups[w] & a & ~b == 0) for b in range(size)]
                    for a in range(size)]


def _compile(phi: Formula, tables: _Tables, index: dict[str, int]):
    """Turn ``phi`` into a function from a tuple of letter masks to its truth set."""
    if isinstance(phi, Letter):
        i = index[phi.name]
        return lambda v: v[i]
    if isinstance(phi, Bottom):
        return lambda v: 0
    if isinstance(phi, Circ):
        g = _compile(phi.body, tables, index)
        box = tables.box
        return lambda v: box[g(v)]
    if isinstance(phi, (And, Or, Implies)):
        a = _compile(phi.left, tables, index)
        b = _compile(phi.right, tables, index)
        if isinstance(phi, And):
            return lambda v: a(v) & b(v)
        if isinstance(phi, Or):
            return lambda v: a(v) | b(v)
        imp = tables.imp
        return lambda v: imp[a(v)][b(v)]
    raise ValueError(f"not a propositional modal formula: {phi!r}")


def truth_set(m: Model, phi: Formula) -> frozenset[int]:
    if not is_propositional(phi):
        raise ValueError("Kripke semantics covers the propositional fragment only")
    names = letters(phi)
    for p in names:
        if p not in m.valuation:
            raise KeyError(f"letter {p} has no valuation")
    fn = _compile(phi, _Tables(m.frame), {p: i for i, p in enumerate(names)})
    return frozenset(_bits(fn(tuple(_mask(m.valuation[p]) for p in names))))


def forces(m: Model, w: int, phi: Formula) -> bool:
    if not 0 <= w < m.frame.size:
        raise KeyError(f"unknown world {w}")
    return w in truth_set(m, phi)


def _valuations(f: Frame, names: list[str], guard: int):
    ups = up_sets(f)
    needed = len(ups) ** len(names) * f.size
    if needed > guard:
        raise ResourceGuardExceeded(needed, guard)
    return itertools.product(ups, repeat=len(names))


def refute_on_frame(f: Frame, phi: Formula, guard: int = DEFAULT_GUARD):
    """First ``(valuation masks, world)`` refuting ``phi`` on ``f``, or ``None``."""
    names = letters(phi)
    tables = _Tables(f)
    fn = _compile(phi, tables, {p: i for i, p in enumerate(names)})
    full = tables.full
    for v in _valuations(f, names, guard):
        t = fn(v)
        if t != full:
            w = next(i for i in range(f.size) if not t >> i & 1)
            return dict(zip(names, v)), w
    return None


def valid_on_frame(f: Frame, phi: Formula, guard: int = DEFAULT_GUARD) -> bool:
    """True at every world under every up-set valuation of the letters of ``phi``."""
    return refute_on_frame(f, phi, guard) is None


# -- enumeration -----------------------------------------------------------

def _perms(n):
    return list(itertools.permutations(range(n)))


def _code(pairs, n, perm=None):
    if perm is None:
        return sum(1 << (w * n + u) for w, u in pairs)
    return sum(1 << (perm[w] * n + perm[u]) for w, u in pairs)


def posets(n: int) -> list[frozenset]:
    """All partial orders on ``0..n-1``, ascending by encoding."""
    off = [(a, b) for a in range(n) for b in range(n) if a != b]
    diag = {(w, w) for w in range(n)}
    out = []
    for bits in range(1 << len(off)):
        rel = set(diag)
        rel.update(p for i, p in enumerate(off) if bits >> i & 1)
        if any((b, a) in rel for (a, b) in rel if a != b):
            continue
        if any((b, c) in rel and (a, c) not in rel for (a, b) in rel for c in range(n)):
            continue
        out.append(frozenset(rel))
    out.sort(key=lambda r: _code(r, n))
    return out


def frames(n: int, logic: str = IEL_MINUS, canonical: bool = False) -> Iterator[Frame]:
    """Frames on ``n`` worlds in ascending ``(<=, E)`` encoding order.

    With ``canonical`` only the lexicographically least labelling of each
    isomorphism class is produced.  That representative is also the first
    member of its class in the full order, so searches that stop at the first
    hit return the same frame either way.
    """
    perms = _perms(n) if canonical else None
    for leq in posets(n):
        pairs = sorted(leq, key=lambda p: p[0] * n + p[1])
        leq_code = _code(leq, n)
        if canonical and any(_code(leq, n, p) < leq_code for p in perms):
            continue
        autos = [p for p in perms if _code(leq, n, p) == leq_code] if canonical else None
        cands = []
        for bits in range(1 << len(pairs)):
            E = frozenset(p for i, p in enumerate(pairs) if bits >> i & 1)
            cands.append((_code(E, n), E))
        cands.sort(key=lambda c: c[0])
        for e_code, E in cands:
            f = Frame(n, leq, E)
            if not frame_ok(f, logic):
                continue
            if canonical and any(_code(E, n, p) < e_code for p in autos):
                continue
            yield f


def all_frames(max_worlds: int, logic: str = IEL_MINUS, canonical: bool = False) -> Iterator[Frame]:
    for n in range(1, max_worlds + 1):
        yield from frames(n, logic, canonical)


@dataclass(frozen=True)
class Countermodel:
    model: Model
    world: int


def countermodel(phi: Formula, logic: str = IEL_MINUS, max_worlds: int = 4,
                 guard: int = DEFAULT_GUARD, canonical: bool = True) -> Countermodel | None:
    """The first refuting model-world pair in enumeration order, or ``None``.

    ``ResourceGuardExceeded`` signals that the search could not be completed,
    which is different from "valid up to the bound".
    """
    if max_worlds < 1:
        raise ValueError("max_worlds must be at least 1")
    for f in all_frames(max_worlds, logic, canonical):
        hit = refute_on_frame(f, phi, guard)
        if hit is not None:
            masks, w = hit
            return Countermodel(Model(f, {p: _bits(m) for p, m in masks.items()}), w)
    return None


# -- text format -----------------------------------------------------------

def parse_frame_text(text: str) -> tuple[Frame, dict]:
    """Read a frame (and optional valuation) from text.

    The first non-comment line is the world count.  Then ``leq: i j`` and
    ``E: i j`` lines list pairs (reflexive ``leq`` pairs are added
    automatically), and ``val p: i j ...`` lines give a valuation.
    """
    size = None
    leq, E, val = set(), set(), {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if size is None:
                size = int(line)
                if size < 1:
                    raise ValueError("world count must be positive")
                continue
            key, _, rest = line.partition(":")
            key = key.strip()
            nums = [int(x) for x in rest.split()]
            if key in ("leq", "E"):
                if len(nums) != 2:
                    raise ValueError(f"{key} needs two worlds")
                (leq if key == "leq" else E).add(tuple(nums))
            elif key.startswith("val "):
                val[key[4:].strip()] = set(nums)
            else:
                raise ValueError(f"unknown line kind {key!r}")
        except ValueError as e:
            raise ValueError(f"line {lineno}: {e}") from None
    if size is None:
        raise ValueError("empty frame description")
    leq |= {(w, w) for w in range(size)}
    return Frame(size, leq, E), val


def format_frame(f: Frame, valuation: dict | None = None) -> str:
    lines = [str(f.size)]
    lines += [f"leq: {a} {b}" for a, b in sorted(f.leq) if a != b]
    lines += [f"E: {a} {b}" for a, b in sorted(f.E)]
    for p, ws in (valuation or {}).items():
        lines.append(f"val {p}:" + "".join(f" {w}" for w in sorted(ws)))
    return "\n".join(lines) + "\n"
