from __future__ import annotations

import dataclasses

import pytest

from conftest import FIXTURE_NAMES, lattice
from latticegen.core import (
    InvalidLattice,
    LevelledLattice,
    deserialize,
    mask_of,
    meet,
    minimal_elements,
    parent,
    serialize,
    shade_closure,
    validate,
)
from latticegen.enumeration import EnumConfig, enumerate_lattices
from latticegen.oracle import depths, poset_of


def S(*labels):
    return mask_of(labels)


def patched_meet(L, a, b, value):
    rows = [list(r) for r in L.meet]
    rows[a][b] = rows[b][a] = value
    return dataclasses.replace(L, meet=tuple(tuple(r) for r in rows))


# -- validate ---------------------------------------------------------------


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_fixtures_validate(fx, name):
    assert validate(fx[name]) is None


def test_validate_rejects_patched_meet(fx):
    bad = patched_meet(fx["N5"], 2, 3, 4)
    with pytest.raises(InvalidLattice) as err:
        validate(bad)
    assert err.value.kind == "meet-table"


def test_validate_accepts_d4b_built_by_hand():
    L = lattice(5, [[1], [1], [2, 3]], [2, 4, 5])
    validate(L)
    assert meet(L, 2, 3) == 4


def test_from_covers_rejects_non_lattice():
    # atoms 4 and 5 both under {2, 3}: the pair {2, 3} has two maximal lower bounds
    with pytest.raises(InvalidLattice) as err:
        lattice(6, [[1], [1], [2, 3], [2, 3]])
    assert err.value.kind == "not-a-lattice"


def test_from_covers_rejects_bad_levels():
    with pytest.raises(InvalidLattice) as err:
        lattice(4, [[1], [2]], [2, 4])
    assert err.value.kind == "level"


def test_from_covers_rejects_non_antichain_cover():
    with pytest.raises(InvalidLattice):
        lattice(5, [[1], [2], [2, 3]])


# -- meet / shade / minimal elements ---------------------------------------------


def test_meet_examples(fx):
    assert meet(fx["D4"], 2, 3) == 0
    assert meet(fx["N5"], 2, 4) == 4
    assert meet(fx["D4b"], 2, 3) == 4


def test_meet_forced_rows(fx):
    L = fx["H6"]
    for x in range(L.n):
        assert meet(L, 0, x) == 0
        assert meet(L, 1, x) == x


def test_meet_out_of_range(fx):
    with pytest.raises(IndexError):
        meet(fx["D4"], 2, 4)


def test_shade_closure_examples(fx):
    assert shade_closure(fx["N5"], S(4)) == S(2, 4)
    assert shade_closure(fx["D4"], S(2, 3)) == S(2, 3)
    assert shade_closure(fx["H6"], S(3, 4)) == S(2, 3, 4)


def test_minimal_elements_examples(fx):
    assert minimal_elements(fx["N5"], S(2, 4)) == S(4)
    assert minimal_elements(fx["D4"], S(2, 3)) == S(2, 3)
    assert minimal_elements(fx["H6"], S(2, 3, 4)) == S(3, 4)


# -- parent ----------------------------------------------------------------------


def test_parent_examples(fx):
    assert parent(fx["N5"]) == fx["D4"]
    assert parent(fx["H6"]) == fx["D4"]
    P = parent(fx["D4b"])
    assert P == fx["D4"]
    assert meet(P, 2, 3) == 0


def test_parent_of_root_is_an_error(fx):
    with pytest.raises(ValueError):
        parent(fx["L2"])


# -- text records -------------------------------------------------------------------


def test_serialize_examples(fx):
    assert serialize(fx["D4"]) == "4|2|1:1"
    assert serialize(fx["N5"]) == "5|2,1|1:1:2"
    assert serialize(fx["H6"]) == "6|2,2|1:1:2:3"
    assert serialize(fx["L2"]) == "2||"


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_record_round_trip(fx, name):
    L = fx[name]
    text = serialize(L)
    assert deserialize(text) == L
    assert serialize(deserialize(text)) == text


@pytest.mark.parametrize(
    "record",
    ["4|2", "4|x|1:1", "4|1|1:1", "5|2,1|1:1:3,2", "6|2,2|1:1:2,3:2,3", "4|2|1:1:1"],
)
def test_deserialize_rejects_malformed(record):
    with pytest.raises(InvalidLattice):
        deserialize(record)


# -- invariants over every enumerated lattice -------------------------------------


@pytest.fixture(scope="module")
def small_lattices():
    out = []
    enumerate_lattices(EnumConfig(8, "all", engine="python", sink=out.append))
    return [deserialize(r) for r in out]


def test_enumerated_lattices_validate_and_round_trip(small_lattices):
    assert len(small_lattices) == 1 + 1 + 2 + 5 + 15 + 53 + 222
    for L in small_lattices:
        validate(L)
        assert deserialize(serialize(L)) == L


def test_meet_table_laws(small_lattices):
    for L in small_lattices:
        for a in range(L.n):
            assert meet(L, a, a) == a
            for b in range(L.n):
                c = meet(L, a, b)
                assert c == meet(L, b, a)
                assert meet(L, a, c) == c


def test_depth_matches_longest_chain(small_lattices):
    for L in small_lattices:
        dep = depths(L.n, poset_of(L))
        for i in range(2, L.n):
            assert dep[i] == L.depth_of(i)


def test_direct_construction_is_frozen(fx):
    with pytest.raises(dataclasses.FrozenInstanceError):
        fx["D4"].n = 7  # type: ignore[misc]
    assert isinstance(fx["D4"], LevelledLattice)
