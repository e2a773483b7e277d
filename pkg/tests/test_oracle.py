from __future__ import annotations

import pytest

from conftest import lattice
from latticegen.enumeration import TABLE_I, TABLE_U, EnumConfig, enumerate_lattices
from latticegen.oracle import (
    brute,
    extended_poset,
    is_canonical_exhaustive,
    is_graded_naive,
    is_lattice_naive,
    is_vertically_decomposable,
    levellised_lattices,
    mode_predicate,
    poset_of,
)


def test_brute_examples(fx):
    assert brute(5, "all").count == 5
    r = brute(5, "vi")
    assert r.count == 2
    assert set(r.representatives) == {fx["N5"], fx["M3"]}


@pytest.mark.parametrize("n", range(2, 9))
def test_brute_matches_published_counts(n):
    assert brute(n, "all").count == TABLE_U[n - 1]
    assert brute(n, "vi").count == TABLE_I[n - 1]


def test_brute_graded_matches_enumeration():
    table = enumerate_lattices(EnumConfig(8, "graded"))
    assert brute(8, "graded").count == table[8]


def test_brute_refuses_large_n():
    with pytest.raises(ValueError):
        brute(9)
    with pytest.raises(ValueError):
        levellised_lattices(9)


def test_is_canonical_exhaustive_examples(fx):
    assert is_canonical_exhaustive(fx["N5"])
    assert not is_canonical_exhaustive(lattice(5, [[1], [1], [3]]))
    assert is_canonical_exhaustive(fx["D4"])


def test_is_canonical_exhaustive_guard():
    with pytest.raises(ValueError):
        is_canonical_exhaustive(lattice(10, [[1]] * 8))


def test_is_lattice_naive_examples(fx):
    assert is_lattice_naive(6, poset_of(fx["H6"]))
    assert is_lattice_naive(4, poset_of(fx["C4"]))
    n, P = extended_poset(fx["D4"], [(2, 3), (2, 3)])
    assert not is_lattice_naive(n, P)


def test_predicates(fx):
    assert is_vertically_decomposable(fx["C4"])
    assert is_vertically_decomposable(fx["D4b"])
    assert not is_vertically_decomposable(fx["N5"])
    assert not is_vertically_decomposable(fx["L2"])
    assert is_graded_naive(fx["H6"]) and is_graded_naive(fx["D4b"])
    assert not is_graded_naive(fx["N5"])
    assert mode_predicate("vi-graded")(fx["H6"])
    assert not mode_predicate("vi-graded")(fx["N5"])
    with pytest.raises(ValueError):
        mode_predicate("odd")


def test_labelled_levellised_lattice_counts():
    sizes = {n: len(v) for n, v in levellised_lattices(6).items()}
    assert sizes[2] == 1 and sizes[3] == 1 and sizes[4] == 2
    for n, lats in levellised_lattices(6).items():
        assert len({L.cov for L in lats}) == len(lats)
