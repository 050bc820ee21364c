"""One-step reduction, normalization and joinability for the modal calculus.

Rules, by the names used in redex sites:

    Beta        (\\x. M) N                               -> M[x := N]
    Proj1/2     p1 <M, N> / p2 <M, N>                   -> M / N
    LetFlatten  let o xs, y, zs = Ms, (let o ws = Ns in Q), Ps in R
                                                        -> let o xs, ws, zs = Ms, Ns, Ps in R[y := Q]
    LetPure     let o xs = pure Ms in N   (n >= 1)      -> pure N[xs := Ms]
    LetEmpty    let o _ = _ in M                        -> pure M

Reduction is closed under every term constructor, let bodies included.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterator

from .parser import print_term
from .syntax import (
    App, Lam, LetCirc, Pair, Proj, Pure, Term, Var, all_names, alpha_key,
    children, fresh_name, free_vars, replace_at, substitute, substitute_sim,
    subterm,
)

RULES = ("Beta", "Proj1", "Proj2", "LetFlatten", "LetPure", "LetEmpty")

DEFAULT_FUEL = 100_000


@dataclass(frozen=True)
class RedexSite:
    path: tuple[int, ...]
    rule: str
    arg: int | None = None  # LetFlatten only: position of the inner let among the arguments

    def __str__(self):
        where = ".".join(map(str, self.path)) if self.path else "root"
        rule = self.rule if self.arg is None else f"{self.rule}[{self.arg}]"
        return f"{rule} @ {where}"


@dataclass
class Trace:
    steps: list[tuple[Term, RedexSite]] = field(default_factory=list)
    final: Term | None = None

    def lines(self) -> list[str]:
        """One line per step: the rule, its site, then the term it produced."""
        out = []
        terms = [t for t, _ in self.steps[1:]] + [self.final]
        for (_, site), after in zip(self.steps, terms):
            out.append(f"{site}  {print_term(after)}")
        return out

    def __len__(self):
        return len(self.steps)


class FuelExhausted(Exception):
    def __init__(self, fuel: int, trace: Trace):
        super().__init__(f"no normal form within {fuel} steps")
        self.fuel = fuel
        self.trace = trace


class NoRedex(ValueError):
    pass


# -- redex enumeration -----------------------------------------------------

def _local(t: Term) -> Iterator[tuple[str, int | None]]:
    if isinstance(t, App) and isinstance(t.fun, Lam):
        yield "Beta", None
    elif isinstance(t, Proj) and isinstance(t.body, Pair):
        yield ("Proj1" if t.index == 1 else "Proj2"), None
    elif isinstance(t, LetCirc):
        if not t.args:
            yield "LetEmpty", None
        elif all(isinstance(m, Pure) for m in t.args):
            yield "LetPure", None
        else:
            for i, m in enumerate(t.args):
                if isinstance(m, LetCirc):
                    yield "LetFlatten", i


def _sites(t: Term, path: tuple[int, ...]) -> Iterator[RedexSite]:
    for rule, arg in _local(t):
        yield RedexSite(path, rule, arg)
    for i, c in enumerate(children(t)):
        yield from _sites(c, path + (i,))


def redexes(t: Term) -> list[RedexSite]:
    """All redex sites, leftmost-outermost first."""
    return list(_sites(t, ()))


def first_redex(t: Term) -> RedexSite | None:
    return next(_sites(t, ()), None)


# -- contraction -----------------------------------------------------------

def contract(t: Term, rule: str, arg: int | None = None) -> Term:
    """Contract the redex at the root of ``t``."""
    if rule == "Beta" and isinstance(t, App) and isinstance(t.fun, Lam):
        return substitute(t.fun.body, t.fun.binder, t.arg)
    if rule in ("Proj1", "Proj2") and isinstance(t, Proj) and isinstance(t.body, Pair):
        if (rule == "Proj1") != (t.index == 1):
            raise NoRedex(f"{rule} does not match p{t.index}")
        return t.body.left if t.index == 1 else t.body.right
    if isinstance(t, LetCirc):
        if rule == "LetEmpty" and not t.args:
            return Pure(t.body)
        if rule == "LetPure" and t.args and all(isinstance(m, Pure) for m in t.args):
            return Pure(substitute_sim(t.body, [(x, m.body) for x, m in zip(t.binders, t.args)]))
        if rule == "LetFlatten" and arg is not None and 0 <= arg < len(t.args) \
                and isinstance(t.args[arg], LetCirc):
            return _flatten(t, arg)
    raise NoRedex(f"{rule} does not match at this node")


def _flatten(t: LetCirc, i: int) -> LetCirc:
    inner = t.args[i]
    xs, y, zs = t.binders[:i], t.binders[i], t.binders[i + 1:]
    avoid = set(xs) | set(zs) | free_vars(t.body)
    taken = avoid | set(inner.binders) | all_names(inner.body)
    ws, renaming = [], []
    for w in inner.binders:
        if w in avoid:
            nw = fresh_name(w, taken)
            taken.add(nw)
            renaming.append((w, Var(nw)))
            ws.append(nw)
        else:
            ws.append(w)
    q = substitute_sim(inner.body, renaming) if renaming else inner.body
    return LetCirc(
        xs + tuple(ws) + zs,
        t.args[:i] + inner.args + t.args[i + 1:],
        substitute(t.body, y, q),
    )


def step(t: Term, site: RedexSite) -> Term:
    try:
        node = subterm(t, site.path)
    except IndexError:
        raise NoRedex(f"no node at {site}") from None
    return replace_at(t, site.path, contract(node, site.rule, site.arg))


def successors(t: Term) -> list[tuple[RedexSite, Term]]:
    return [(s, step(t, s)) for s in redexes(t)]


def is_normal(t: Term) -> bool:
    return first_redex(t) is None


def normalize(t: Term, fuel: int = DEFAULT_FUEL) -> tuple[Term, Trace]:
    """Leftmost-outermost normalization; raises ``FuelExhausted`` after ``fuel`` steps."""
    trace = Trace()
    while True:
        site = first_redex(t)
        if site is None:
            trace.final = t
            return t, trace
        if len(trace) >= fuel:
            trace.final = t
            raise FuelExhausted(fuel, trace)
        trace.steps.append((t, site))
        t = step(t, site)


def normal_form(t: Term, fuel: int = DEFAULT_FUEL) -> Term:
    return normalize(t, fuel)[0]


def reduction_equal(t1: Term, t2: Term, fuel: int = DEFAULT_FUEL) -> bool:
    return alpha_key(normal_form(t1, fuel)) == alpha_key(normal_form(t2, fuel))


# -- joinability -----------------------------------------------------------

def joinable(t1: Term, t2: Term, fuel: int = 10_000) -> Term | None:
    """A common reduct of ``t1`` and ``t2`` (up to alpha), or ``None``.

    Both reduction graphs are explored breadth-first, one level at a time,
    alternating sides; ``fuel`` bounds the total number of expanded terms.
    Among the meeting points found at the first successful level, the one
    with the smallest combined depth (then the smallest printed form) wins.
    """
    k1, k2 = alpha_key(t1), alpha_key(t2)
    if k1 == k2:
        return t1
    seen = [{k1: (0, t1)}, {k2: (0, t2)}]
    frontier = [[t1], [t2]]
    spent = 0
    side = 0
    while frontier[0] or frontier[1]:
        if not frontier[side]:
            side = 1 - side
        here, there = seen[side], seen[1 - side]
        nxt, hits = [], []
        for u in frontier[side]:
            if spent >= fuel:
                return _best(hits, seen)
            spent += 1
            depth = here[alpha_key(u)][0]
            for _, v in successors(u):
                kv = alpha_key(v)
                if kv in here:
                    continue
                here[kv] = (depth + 1, v)
                nxt.append(v)
                if kv in there:
                    hits.append(kv)
        if hits:
            return _best(hits, seen)
        frontier[side] = nxt
        side = 1 - side
    return None


def _best(hits, seen):
    if not hits:
        return None
    key = min(hits, key=lambda k: (seen[0][k][0] + seen[1][k][0], print_term(seen[0][k][1])))
    return seen[0][key][1]


def reachable(src: Term, dst: Term, fuel: int) -> bool:
    """Breadth-first: is ``dst`` (up to alpha) reachable from ``src`` within ``fuel`` expansions?"""
    goal = alpha_key(dst)
    start = alpha_key(src)
    if start == goal:
        return True
    seen = {start}
    queue = deque([src])
    spent = 0
    while queue and spent < fuel:
        u = queue.popleft()
        spent += 1
        for _, v in successors(u):
            kv = alpha_key(v)
            if kv == goal:
                return True
            if kv not in seen:
                seen.add(kv)
                queue.append(v)
    return False


def local_confluence_failures(t: Term, fuel: int = 10_000):
    """Pairs of one-step reducts of ``t`` that could not be joined."""
    out = []
    reducts = successors(t)
    for i in range(len(reducts)):
        for j in range(i + 1, len(reducts)):
            (s1, r1), (s2, r2) = reducts[i], reducts[j]
            if joinable(r1, r2, fuel) is None:
                out.append((s1, s2))
    return out
