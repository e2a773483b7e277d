from __future__ import annotations

import random
from itertools import combinations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIXTURE_NAMES, lattice
from latticegen.canonical import (
    BitLayout,
    compare_lattices,
    induced_bit_perm,
    level_min_test,
    pack_level,
    top_level_generators,
    unpack_level,
)
from latticegen.core import (
    bits,
    deserialize,
    level_preserving_perms,
    mask_of,
    relabel,
    shade_closure,
)
from latticegen.enumeration import EnumConfig, enumerate_lattices
from latticegen.extension import IllegalExtension, check_extension, extend
from latticegen.oracle import _upclosed_sets, is_canonical_exhaustive
from latticegen.permgroup import benes_apply, benes_compile, group_closure, identity, transposition


def S(*labels):
    return mask_of(labels)


def lwt(L, d, sets):
    """Per-atom weights of ``sets`` restricted to level ``d``, computed arithmetically."""
    lev = set(L.level(d))
    return tuple(sum(2**j for j in bits(U) if j in lev) for U in sets)


def automorphisms(L):
    return [pi for pi in level_preserving_perms(L) if relabel(L, pi) == L]


def chain_verdicts(L, upsets, stab):
    """Per-level accept/reject outcomes and groups of the stabiliser chain."""
    m = len(upsets)
    gens = top_level_generators(stab, L.n, m)
    out = []
    for d in range(L.depth, 0, -1):
        layout = BitLayout.of(L, d, m)
        gens = level_min_test(pack_level(L, d, m, upsets), gens, layout)
        out.append(None if gens is None else group_closure(gens, L.n + m) if gens else {identity(L.n + m)})
        if gens is None:
            break
    return out


# -- packing ---------------------------------------------------------------------


def test_pack_level_examples(fx):
    D4 = fx["D4"]
    assert pack_level(D4, 1, 2, [S(2), S(3)]) == 6
    assert pack_level(D4, 1, 2, [S(3), S(2)]) == 9
    assert pack_level(fx["H6"], 1, 3, [0, 0, 0]) == 0
    assert pack_level(fx["H6"], 2, 2, [0, 0]) == 0


def test_pack_level_word_limit():
    M11 = lattice(13, [[1]] * 11)
    with pytest.raises(ValueError):
        pack_level(M11, 1, 12, [S(2)] * 12)
    assert pack_level(M11, 1, 11, [S(2)] * 11) > 0


def test_unpack_inverts_pack(fx):
    H6 = fx["H6"]
    layout = BitLayout.of(H6, 1, 2)
    sets = [S(2), S(2, 3)]
    assert unpack_level(pack_level(H6, 1, 2, sets), layout) == sets


def test_induced_bit_perm_examples(fx):
    layout = BitLayout.of(fx["D4"], 1, 2)
    assert induced_bit_perm(transposition(6, 4, 5), layout) == [2, 3, 0, 1]
    assert induced_bit_perm(transposition(6, 2, 3), layout) == [1, 0, 3, 2]
    assert induced_bit_perm(identity(6), layout) == [0, 1, 2, 3]


def test_induced_bit_perm_rejects_level_change(fx):
    layout = BitLayout.of(fx["N5"], 1, 1)
    with pytest.raises(ValueError):
        induced_bit_perm(transposition(6, 3, 4), layout)
    with pytest.raises(ValueError):
        induced_bit_perm(transposition(6, 2, 5), layout)


def test_level_min_test_examples(fx):
    layout = BitLayout.of(fx["D4"], 1, 2)
    gens = [transposition(6, 2, 3), transposition(6, 4, 5)]
    nxt = level_min_test(6, gens, layout)
    assert nxt is not None
    assert group_closure(nxt, 6) == {identity(6), (0, 1, 3, 2, 5, 4)}
    assert level_min_test(9, gens, layout) is None
    assert level_min_test(9, [], layout) == []


# -- the level-major order ---------------------------------------------------------


def test_compare_examples(fx):
    N5b = lattice(5, [[1], [1], [3]])
    H6b = lattice(6, [[1], [1], [3], [2]])
    assert compare_lattices(fx["N5"], N5b) == -1
    assert compare_lattices(fx["D4"], fx["D4"]) == 0
    assert compare_lattices(fx["H6"], H6b) == -1
    assert compare_lattices(H6b, fx["H6"]) == 1


def test_compare_rejects_mismatched_profiles(fx):
    with pytest.raises(ValueError):
        compare_lattices(fx["N5"], fx["M3"])


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_total_order_axioms(fx, name):
    L = fx[name]
    variants = list({X.cov: X for X in (relabel(L, pi) for pi in level_preserving_perms(L))}.values())
    for a in variants:
        for b in variants:
            c = compare_lattices(a, b)
            assert c == -compare_lattices(b, a)
            assert (c == 0) == (a == b)
            for x in variants:
                if c < 0 and compare_lattices(b, x) < 0:
                    assert compare_lattices(a, x) < 0


# -- layout and action soundness -----------------------------------------------------


@st.composite
def lattice_level_sets(draw):
    name = draw(st.sampled_from(["D4", "N5", "M3", "H6", "D4b", "C4"]))
    return name, draw(st.integers(1, 4)), draw(st.randoms(use_true_random=False))


@settings(max_examples=200, deadline=None)
@given(lattice_level_sets())
def test_layout_order_is_lexicographic(fx, data):
    name, m, rnd = data
    L = fx[name]
    d = rnd.randint(1, L.depth)
    interior = list(range(2, L.n))
    sets_a = [mask_of(x for x in interior if rnd.random() < 0.5) for _ in range(m)]
    sets_b = [mask_of(x for x in interior if rnd.random() < 0.5) for _ in range(m)]
    wa, wb = pack_level(L, d, m, sets_a), pack_level(L, d, m, sets_b)
    la, lb = lwt(L, d, sets_a), lwt(L, d, sets_b)
    assert (wa < wb) == (la < lb)
    assert (wa == wb) == (la == lb)


@settings(max_examples=200, deadline=None)
@given(lattice_level_sets())
def test_action_on_words(fx, data):
    name, m, rnd = data
    L = fx[name]
    d = rnd.randint(1, L.depth)
    n, N = L.n, L.n + m
    interior = list(range(2, n))
    sets = [mask_of(x for x in interior if rnd.random() < 0.5) for _ in range(m)]
    pi = [0, 1]
    for e in range(1, L.depth + 1):
        block = list(L.level(e))
        rnd.shuffle(block)
        pi += block
    atoms = list(range(n, N))
    rnd.shuffle(atoms)
    pi += atoms
    layout = BitLayout.of(L, d, m)
    net = benes_compile(induced_bit_perm(pi, layout), layout.bits)
    image = [0] * m
    for t, U in enumerate(sets):
        image[pi[n + t] - n] = mask_of(pi[j] for j in bits(U))
    assert benes_apply(net, pack_level(L, d, m, sets)) == pack_level(L, d, m, image)


# -- chain vs global minimality --------------------------------------------------


@pytest.fixture(scope="module")
def canonical_bases():
    out = []
    enumerate_lattices(EnumConfig(6, "all", engine="python", sink=out.append))
    return [deserialize(r) for r in out]


def test_chain_matches_global_minimality(canonical_bases):
    checked = accepted = 0
    for L in canonical_bases:
        stab = automorphisms(L)
        cands = _upclosed_sets(L)
        for m in range(1, 8 - L.n):
            for upsets in product(cands, repeat=m):
                try:
                    check_extension(L, upsets)
                except IllegalExtension:
                    continue
                verdicts = chain_verdicts(L, upsets, stab)
                chain_ok = all(v is not None for v in verdicts)
                child = extend(L, upsets)
                assert chain_ok == is_canonical_exhaustive(child), (L, upsets)
                checked += 1
                accepted += chain_ok
    assert checked > accepted > 0


# -- up-closed sets versus antichains --------------------------------------------------


def antichains(L):
    interior = list(range(2, L.n))
    out = [0]
    for r in range(1, len(interior) + 1):
        for A in combinations(interior, r):
            if all(not L.leq(a, b) for a in A for b in A if a != b):
                out.append(mask_of(A))
    return out


def levelwise_key(L, X):
    return tuple(sum(2**j for j in bits(X) if j in set(L.level(d))) for d in range(L.depth, 0, -1))


@pytest.mark.parametrize("name", ["C4", "D4", "N5", "M3", "H6", "D4b"])
def test_weights_of_antichains_and_shades_agree(fx, name):
    L = fx[name]
    acs = antichains(L)
    for A, B in product(acs, repeat=2):
        ka, kb = levelwise_key(L, A), levelwise_key(L, B)
        ua, ub = levelwise_key(L, shade_closure(L, A)), levelwise_key(L, shade_closure(L, B))
        assert (ka < kb) == (ua < ub)


@pytest.mark.parametrize("name", ["D4", "N5", "M3", "H6", "D4b", "C4"])
def test_chain_on_antichains_matches_chain_on_shades(fx, name):
    L = fx[name]
    stab = automorphisms(L)
    cands = _upclosed_sets(L)
    for m in range(1, 4):
        for upsets in product(cands, repeat=m):
            try:
                check_extension(L, upsets)
            except IllegalExtension:
                continue
            covers = [mask_of(x for x in bits(U) if not any(L.up[y] >> x & 1 for y in bits(U))) for U in upsets]
            assert chain_verdicts(L, upsets, stab) == chain_verdicts(L, covers, stab)


def test_random_level_preserving_relabelling_is_never_smaller_than_canonical(canonical_bases):
    rng = random.Random(7)
    for L in canonical_bases:
        perms = list(level_preserving_perms(L))
        for pi in rng.sample(perms, min(len(perms), 5)):
            assert compare_lattices(relabel(L, pi), L) >= 0
