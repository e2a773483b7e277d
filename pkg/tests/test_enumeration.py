from __future__ import annotations

from collections import Counter

import pytest

from conftest import lattice
from latticegen.core import deserialize, level_preserving_perms, relabel, serialize
from latticegen.enumeration import (
    MODES,
    ROOT,
    TABLE_I,
    TABLE_U,
    CountTable,
    EnumConfig,
    SearchNode,
    children,
    compose_counts,
    enumerate_lattices,
)
from latticegen.oracle import brute, is_canonical_exhaustive
from latticegen.permgroup import group_closure, identity


def node_of(L, parent_node, m):
    for child in children(parent_node, m):
        if child.lattice == L:
            return child
    raise AssertionError(f"{L} is not a child")


@pytest.fixture(scope="module")
def d4_node(fx):
    return node_of(fx["D4"], ROOT, 2)


def emitted(n_max, mode="all", engine="python", **kw):
    out = []
    table = enumerate_lattices(EnumConfig(n_max, mode, sink=out.append, engine=engine, **kw))
    return table, out


# -- children -------------------------------------------------------------------


def test_children_of_d4(fx, d4_node):
    kids = {c.lattice for c in children(d4_node, 1)}
    assert kids == {fx["N5"], fx["D4b"]}


def test_children_of_d4_vi(fx, d4_node):
    assert {c.lattice for c in children(d4_node, 1, "vi")} == {fx["N5"]}


def test_children_of_root(fx):
    assert [c.lattice for c in children(ROOT, 2)] == [fx["D4"]]
    assert list(children(ROOT, 1, "vi")) == []


def test_children_stabilisers(fx, d4_node):
    assert group_closure(d4_node.stab_gens, 4) == {identity(4), (0, 1, 3, 2)}
    n5 = node_of(fx["N5"], d4_node, 1)
    assert n5.stab_gens == ()


def test_search_node_size(fx):
    assert SearchNode(fx["H6"]).n == 6
    assert ROOT.n == 2


# -- enumerate -------------------------------------------------------------------


@pytest.mark.parametrize("engine", ["python", "kernel"])
def test_enumerate_examples(engine):
    t = enumerate_lattices(EnumConfig(6, "all", engine=engine))
    assert t.counts == {2: 1, 3: 1, 4: 2, 5: 5, 6: 15}
    t = enumerate_lattices(EnumConfig(6, "vi", engine=engine))
    assert t.counts == {2: 1, 3: 0, 4: 1, 5: 2, 6: 7}
    for mode in MODES:
        assert enumerate_lattices(EnumConfig(2, mode, engine=engine)).counts == {2: 1}


def test_enumerate_matches_published_counts_up_to_nine():
    all_ = enumerate_lattices(EnumConfig(9, "all", engine="python"))
    vi = enumerate_lattices(EnumConfig(9, "vi", engine="python"))
    assert [all_[n] for n in range(1, 10)] == list(TABLE_U[:9])
    assert [vi[n] for n in range(2, 10)] == list(TABLE_I[1:9])


@pytest.mark.parametrize("bad", [dict(n_max=1), dict(n_max=25), dict(n_max=5, mode="odd"),
                                 dict(n_max=5, threads=0), dict(n_max=5, seed_size=6),
                                 dict(n_max=5, engine="gpu")])  # fmt: skip
def test_config_validation(bad):
    with pytest.raises(ValueError):
        EnumConfig(**bad)


def test_count_table_text():
    t = CountTable("vi", 4, {2: 1, 3: 0, 4: 1})
    assert t.to_tsv() == "# mode=vi max_n=4\n1\t1\n2\t1\n3\t0\n4\t1\n"
    assert t[1] == 1 and t[9] == 0
    assert t.total == 2


# -- exactly once, canonical, complete --------------------------------------------


@pytest.mark.parametrize("mode", MODES)
def test_counts_match_brute_force(mode):
    table = enumerate_lattices(EnumConfig(7, mode, engine="python"))
    for n in range(2, 8):
        assert table[n] == brute(n, mode).count


@pytest.mark.parametrize("mode", MODES)
def test_emitted_lattices_are_canonical_and_distinct(mode):
    _, records = emitted(7, mode)
    assert len(records) == len(set(records))
    lattices = [deserialize(r) for r in records]
    classes = set()
    for L in lattices:
        assert is_canonical_exhaustive(L)
        key = min(relabel(L, pi).cov for pi in level_preserving_perms(L))
        classes.add((L.level_starts, key))
    assert len(classes) == len(lattices)


@pytest.mark.parametrize("mode", MODES)
def test_emitted_set_equals_brute_representatives(mode):
    _, records = emitted(7, mode)
    got = {r for r in records if deserialize(r).n == 7}
    assert got == {serialize(L) for L in brute(7, mode).representatives}


def test_stabiliser_generators_are_automorphism_groups():
    def visit(node, n_max):
        L = node.lattice
        autos = {pi for pi in level_preserving_perms(L) if relabel(L, pi) == L}
        got = group_closure(node.stab_gens, L.n) if node.stab_gens else {identity(L.n)}
        assert got == autos, serialize(L)
        for m in range(1, n_max - L.n + 1):
            for child in children(node, m):
                visit(child, n_max)

    visit(ROOT, 8)


@pytest.mark.parametrize("mode", MODES)
def test_deferred_level_tests_change_nothing(mode):
    def walk(node, n_max, early):
        out = [serialize(node.lattice)]
        for m in range(1, n_max - node.n + 1):
            for child in children(node, m, mode, early_abort=early):
                out += walk(child, n_max, early)
        return out

    a, b = walk(ROOT, 8, True), walk(ROOT, 8, False)
    assert Counter(a) == Counter(b)


# -- recurrence -----------------------------------------------------------------------


def test_compose_counts_examples():
    assert compose_counts([1, 1, 0, 1, 2, 7])[5] == 15
    u = compose_counts([1, 1, 0, 1, 2, 7, 27, 126])
    assert u[3] == 2 and u[6] == 53 and u[7] == 222
    u = compose_counts(TABLE_I)
    assert u[19] == 23003059864006
    assert tuple(u) == TABLE_U


def test_compose_counts_needs_leading_one():
    with pytest.raises(ValueError):
        compose_counts([2, 1])
    with pytest.raises(ValueError):
        compose_counts([])


def test_compose_counts_matches_enumeration():
    vi = enumerate_lattices(EnumConfig(10, "vi"))
    all_ = enumerate_lattices(EnumConfig(10, "all"))
    u = compose_counts([vi[n] for n in range(1, 11)])
    assert u == [all_[n] for n in range(1, 11)]


def test_relabelled_fixture_not_emitted():
    _, records = emitted(5)
    assert serialize(lattice(5, [[1], [1], [3]])) not in records
    assert "5|2,1|1:1:2" in records
