import itertools
import random

import pytest
from hypothesis import given, strategies as st

from ielc.formula import And, Bottom, Circ, Implies, Letter, Or
from ielc.kripke import (
    IEL, IEL_MINUS, Frame, FrameError, Model, ResourceGuardExceeded, countermodel, format_frame,
    forces, frames, parse_frame_text, posets, refute_on_frame, truth_set, up_sets, valid_on_frame,
    validate_frame,
)
from ielc.parser import parse_formula


def naive_forces(f: Frame, val: dict, w: int, phi) -> bool:
    """Direct reading of the forcing clauses, world by world."""
    if isinstance(phi, Letter):
        return w in val[phi.name]
    if isinstance(phi, Bottom):
        return False
    if isinstance(phi, And):
        return naive_forces(f, val, w, phi.left) and naive_forces(f, val, w, phi.right)
    if isinstance(phi, Or):
        return naive_forces(f, val, w, phi.left) or naive_forces(f, val, w, phi.right)
    if isinstance(phi, Implies):
        return all(not naive_forces(f, val, u, phi.left) or naive_forces(f, val, u, phi.right)
                   for u in range(f.size) if (w, u) in f.leq)
    if isinstance(phi, Circ):
        return all(naive_forces(f, val, u, phi.body) for u in range(f.size) if (w, u) in f.E)
    raise TypeError(phi)


def random_formula(rng, depth, letters="pq"):
    k = rng.randrange(6 if depth else 2)
    if k == 0:
        return Letter(rng.choice(letters))
    if k == 1:
        return Bottom()
    if k == 2:
        return Circ(random_formula(rng, depth - 1, letters))
    return (And, Or, Implies)[k - 3](random_formula(rng, depth - 1, letters),
                                     random_formula(rng, depth - 1, letters))


def random_model(rng, logic=IEL_MINUS):
    n = rng.randint(1, 3)
    f = rng.choice(list(frames(n, logic)))
    ups = up_sets(f)
    val = {}
    for p in "pq":
        X = rng.choice(ups)
        val[p] = {w for w in range(n) if X >> w & 1}
    return Model(f, val)


# ------------- frames -------------

def test_poset_counts() -> None:
    # labelled partial orders on 1..4 points
    assert [len(posets(n)) for n in range(1, 5)] == [1, 3, 19, 219]


def test_frame_counts() -> None:
    assert [sum(1 for _ in frames(n)) for n in (1, 2, 3)] == [2, 16, 338]
    assert [sum(1 for _ in frames(n, canonical=True)) for n in (1, 2, 3)] == [2, 9, 65]
    assert [sum(1 for _ in frames(n, IEL, canonical=True)) for n in (1, 2, 3)] == [1, 3, 14]


def test_canonical_frames_cover_every_labelled_frame() -> None:
    for n in (1, 2, 3):
        def key(f):
            return min((sum(1 << (p[a] * n + p[b]) for a, b in f.leq),
                        sum(1 << (p[a] * n + p[b]) for a, b in f.E))
                       for p in itertools.permutations(range(n)))
        labelled = {key(f) for f in frames(n)}
        canon = [key(f) for f in frames(n, canonical=True)]
        assert len(canon) == len(set(canon))
        assert set(canon) == labelled


@pytest.mark.parametrize("leq, E, logic, cond", [
    ({(0, 1)}, set(), IEL_MINUS, "reflexivity"),
    ({(0, 0), (1, 1), (0, 1), (1, 0)}, set(), IEL_MINUS, "antisymmetry"),
    ({(0, 0), (1, 1)}, {(0, 1)}, IEL_MINUS, "E-inside-up"),
    ({(0, 0), (1, 1), (0, 1)}, {(1, 1)}, IEL_MINUS, "E-antitone"),
    ({(0, 0)}, set(), IEL, "seriality"),
])
def test_frame_conditions(leq, E, logic, cond) -> None:
    with pytest.raises(FrameError) as info:
        validate_frame(Frame(2 if cond != "seriality" else 1, leq, E), logic)
    assert info.value.condition == cond


# ------------- forcing -------------

def test_forcing_examples() -> None:
    f = Frame(2, {(0, 0), (1, 1), (0, 1)}, {(0, 1), (1, 1)})
    m = Model(f, {"p": {1}})
    assert forces(m, 0, parse_formula("O p"))
    assert not forces(m, 0, parse_formula("p"))
    assert truth_set(m, parse_formula("p -> O p")) == {0, 1}


def test_model_check_rejects_non_up_set() -> None:
    f = Frame(2, {(0, 0), (1, 1), (0, 1)}, set())
    with pytest.raises(ValueError):
        Model(f, {"p": {0}}).check()


@given(st.integers(0, 10**9))
def test_truth_sets_match_naive_forcing(seed) -> None:
    rng = random.Random(seed)
    m = random_model(rng)
    phi = random_formula(rng, 4)
    ts = truth_set(m, phi)
    assert ts == {w for w in range(m.frame.size) if naive_forces(m.frame, m.valuation, w, phi)}


@given(st.integers(0, 10**9))
def test_truth_sets_are_up_sets(seed) -> None:
    rng = random.Random(seed)
    m = random_model(rng)
    ts = truth_set(m, random_formula(rng, 4))
    assert all(b in ts for a, b in m.frame.leq if a in ts)


# ------------- validity and countermodels -------------

def test_countermodels_are_one_world_without_successors() -> None:
    for src in ("O p -> p", "O false -> false"):
        cm = countermodel(parse_formula(src), IEL_MINUS, 2)
        assert cm is not None and cm.model.frame.size == 1 and not cm.model.frame.E
        assert not forces(cm.model, cm.world, parse_formula(src))


def test_reflection_on_serial_frames() -> None:
    phi = parse_formula("O p -> ~~p")
    assert countermodel(phi, IEL, 3) is None
    assert countermodel(phi, IEL_MINUS, 1) is not None


def test_search_is_deterministic_and_canonical_agrees() -> None:
    phi = parse_formula("(O p -> O q) -> O (p -> q)")
    a = countermodel(phi, IEL_MINUS, 3)
    b = countermodel(phi, IEL_MINUS, 3, canonical=False)
    assert a is not None
    assert format_frame(a.model.frame, a.model.valuation) == format_frame(b.model.frame, b.model.valuation)
    assert a.world == b.world


def test_guard() -> None:
    f = Frame(1, {(0, 0)}, set())
    with pytest.raises(ResourceGuardExceeded):
        refute_on_frame(f, parse_formula("p & q & r"), guard=4)
    assert valid_on_frame(f, parse_formula("p -> p"))


def test_frame_text_round_trip(fixtures) -> None:
    f, val = parse_frame_text((fixtures / "serial2.frame").read_text())
    assert f.size == 2 and (0, 1) in f.leq and val == {"p": {1}}
    validate_frame(f, IEL)
    again, val2 = parse_frame_text(format_frame(f, val))
    assert again == f and val2 == val
    g, gv = parse_frame_text((fixtures / "empty1.frame").read_text())
    assert g.size == 1 and gv == {"p": set()}
