import json
import random

import pytest
from hypothesis import given, strategies as st

from ielc.coversys import (
    CoverSystem, CoverSystemError, FinitePoset, LatticeError, PosetError, build_SL, chain,
    classify_cover_system, diamond, diamond_lattice, heyting_arrow, j_op, propositions, up_sets,
    validate_cover_system,
)
from ielc.coversys import io as cio
from ielc.coversys.generate import (
    random_modal_systems, random_strict_localic, strict_localic_systems,
)
from ielc.coversys.poset import reflexive_transitive_closure
from ielc.coversys.system import check_directed

seeds = st.integers(0, 10**9)


def two_chain() -> FinitePoset:
    # 0 <= 1
    return FinitePoset.from_pairs(("x", "y"), [(0, 1)])


# ------------- posets -------------

def test_up_sets_of_small_posets() -> None:
    assert up_sets(two_chain()) == [0b00, 0b10, 0b11]
    anti = FinitePoset(("a", "b"), {(0, 0), (1, 1)})
    assert up_sets(anti) == [0, 1, 2, 3]


def test_poset_validation() -> None:
    with pytest.raises(PosetError):
        FinitePoset(("a", "b"), {(0, 0), (1, 1), (0, 1), (1, 0)}).validate()
    assert reflexive_transitive_closure(3, [(0, 1), (1, 2)]) >= {(0, 2), (1, 1)}


# ------------- j, propositions, <R> -------------

def test_j_and_propositions() -> None:
    p = two_chain()
    trivial = CoverSystem.from_relation(p, [(0, [0]), (1, [1])])
    assert j_op(trivial, 0b10) == 0b10
    assert propositions(trivial) == [0b00, 0b10, 0b11]
    # y is covered by the empty family, so every proposition must contain y
    with_empty = CoverSystem.from_relation(p, [(0, [0]), (1, [1]), (1, [])])
    assert j_op(with_empty, 0) == 0b10
    assert propositions(with_empty) == [0b10, 0b11]


def test_diamond_and_arrow() -> None:
    p = two_chain()
    s = CoverSystem.from_relation(p, [(0, [0]), (1, [1])], R={(0, 1), (1, 1)})
    assert diamond(s, 0b10) == 0b11
    assert diamond(s, 0b01) == 0
    assert heyting_arrow(p, 0b10, 0) == 0
    assert heyting_arrow(p, 0b11, 0b10) == 0b10


def test_missing_relation() -> None:
    s = CoverSystem.from_relation(two_chain(), [(0, [0]), (1, [1])])
    with pytest.raises(ValueError):
        diamond(s, 1)
    c = classify_cover_system(s)
    assert c["strict"] and not c["modal"]


def test_validate_reports_witness() -> None:
    s = CoverSystem.from_relation(two_chain(), [(0, [0])])
    with pytest.raises(CoverSystemError) as info:
        validate_cover_system(s)
    assert "existence" in str(info.value)


# ------------- classification -------------

def test_sl_of_chain_is_iel() -> None:
    s = build_SL(chain(3), (0, 1, 2))
    c = classify_cover_system(s)
    assert all(c.flags.values()), c.lines()


def test_non_serial_witness() -> None:
    s = CoverSystem.from_relation(FinitePoset(("x",), {(0, 0)}), [(0, [0])], R=set())
    c = classify_cover_system(s)
    assert c["modal"] and not c["mult_prenuclear"]
    assert c.witnesses["mult_prenuclear"].condition == "R-serial"


def test_variant_directedness_is_stronger_on_an_example() -> None:
    # 0 sees the two incomparable tops 1 and 2 only: the x-cone (up 0 ∩ up 1)
    # contains 1, but nothing lies above both 1 and 2
    p = FinitePoset.from_pairs(("b", "l", "r"), [(0, 1), (0, 2)])
    s = CoverSystem.from_relation(p, [(0, [0]), (1, [1]), (2, [2])], R={(0, 1), (0, 2), (1, 1), (2, 2)})
    assert check_directed(s) is None
    assert check_directed(s, variant=True) is not None


# ------------- generators -------------

def test_exhaustive_small_systems_are_strict_localic() -> None:
    systems = list(strict_localic_systems(2))
    assert systems
    for s in systems:
        c = classify_cover_system(s)
        assert c["cover"] and c["strict"] and c["localic"]


@given(seeds)
def test_random_strict_localic(seed) -> None:
    rng = random.Random(seed)
    s = random_strict_localic(rng, rng.randint(1, 5))
    c = classify_cover_system(s)
    assert c["cover"] and c["strict"] and c["localic"]


@given(seeds)
def test_j_is_a_nucleus_on_up_sets(seed) -> None:
    rng = random.Random(seed)
    s = random_strict_localic(rng, rng.randint(1, 5))
    ups = up_sets(s.poset)
    for X in ups:
        jX = j_op(s, X)
        assert X & ~jX == 0 and s.poset.is_up(jX) and j_op(s, jX) == jX
        for Y in ups:
            assert j_op(s, X & Y) == jX & j_op(s, Y)


def test_modal_generation_reaches_every_size() -> None:
    systems = random_modal_systems(random.Random(5), 25, want="mult_prenuclear", variant=True)
    assert {s.size for s in systems} == {1, 2, 3, 4, 5}
    assert all(classify_cover_system(s, True)["mult_prenuclear"] for s in systems)


# ------------- structure files -------------

def test_cover_json_round_trip(tmp_path) -> None:
    s = build_SL(diamond_lattice(), (0, 1, 2, 3))
    doc = cio.cover_system_to_json(s)
    again = cio.cover_system_from_json(json.loads(json.dumps(doc)))
    assert again == s
    path = tmp_path / "s.json"
    path.write_text(json.dumps(doc))
    assert cio.kind_of(cio.load(str(path))) == "cover"


@pytest.mark.parametrize("doc", [
    {"elements": ["a", "b"], "leq": [[0, 1], [1, 0]]},
    {"elements": ["a"], "leq": [[0, 3]]},
    {"elements": ["a"], "covers": [[0, [5]]]},
    {"elements": ["a"], "covers": [[0, [0]]], "R": [[0, 2]]},
])
def test_malformed_structures(doc) -> None:
    with pytest.raises(cio.StructureError):
        cio.cover_system_from_json(doc)


def test_locale_json_and_operator_length() -> None:
    l, m = cio.locale_from_json({"elements": ["0", "1"], "leq": [[0, 1]], "m": [1, 1]})
    assert l.size == 2 and m == (1, 1)
    with pytest.raises(cio.StructureError):
        cio.locale_from_json({"elements": ["0", "1"], "leq": [[0, 1]], "m": [1]})
    with pytest.raises(LatticeError):
        cio.locale_from_json({"elements": ["a", "b"], "leq": []})
