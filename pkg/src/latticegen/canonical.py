"""Level-major order on levellised lattices and the per-level canonicity test.

For one level ``d`` of the parent lattice (labels ``b .. b+w-1``) and new
atoms ``n .. n+m-1``, the sets ``U_i`` restricted to the level are packed
into one integer: label ``j`` of atom ``i`` sits at bit
``(n+m-1-i)*w + (j-b)``.  Atom ``n`` owns the most significant block, so
integer comparison is the lexicographic comparison of the weight sequence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import LevelledLattice
from .permgroup import Perm, benes_compile, orbit_scan, transposition

__all__ = [
    "BitLayout",
    "pack_level",
    "unpack_level",
    "induced_bit_perm",
    "level_min_test",
    "top_level_generators",
    "order_key",
    "compare_lattices",
]


@dataclass(frozen=True)
class BitLayout:
    n: int
    m: int
    base: int
    width: int

    @classmethod
    def of(cls, L: LevelledLattice, d: int, m: int) -> BitLayout:
        lo, hi = L.level_starts[d - 1], L.level_starts[d]
        return cls(L.n, m, lo, hi - lo)

    @property
    def bits(self) -> int:
        return self.m * self.width

    def bit(self, atom: int, label: int) -> int:
        return (self.n + self.m - 1 - atom) * self.width + (label - self.base)


def pack_level(L: LevelledLattice, d: int, m: int, upsets: Sequence[int]) -> int:
    layout = BitLayout.of(L, d, m)
    if layout.bits > 128:
        raise ValueError(f"packed word needs {layout.bits} > 128 bits")
    part = (1 << layout.width) - 1
    word = 0
    for U in upsets:
        word = (word << layout.width) | (U >> layout.base & part)
    return word


def unpack_level(word: int, layout: BitLayout) -> list[int]:
    """Inverse of :func:`pack_level`: per-atom label masks on the level."""
    part = (1 << layout.width) - 1
    out = []
    for t in range(layout.m):
        shift = (layout.m - 1 - t) * layout.width
        out.append((word >> shift & part) << layout.base)
    return out


def induced_bit_perm(pi: Perm, layout: BitLayout) -> list[int]:
    """Bit permutation by which ``pi`` acts on packed words of ``layout``."""
    lo, hi = layout.base, layout.base + layout.width
    first, last = layout.n, layout.n + layout.m
    out = [0] * layout.bits
    for i in range(first, last):
        if not first <= pi[i] < last:
            raise ValueError(f"permutation moves new atom {i} to {pi[i]}")
        for j in range(lo, hi):
            if not lo <= pi[j] < hi:
                raise ValueError(f"permutation moves {j} off its level")
            out[layout.bit(i, j)] = layout.bit(pi[i], pi[j])
    return out


def level_min_test(
    word: int,
    gens: Sequence[Perm],
    layout: BitLayout,
    *,
    want_stabiliser: bool = True,
) -> list[Perm] | None:
    """Test ``word`` for minimality in its orbit under the group ``<gens>``.

    Returns ``None`` on rejection, otherwise generators of the stabiliser of
    ``word`` in that group (the group for the next, shallower level).
    """
    if not gens:
        return []
    nets = [(benes_compile(induced_bit_perm(g, layout), layout.bits), g) for g in gens]
    if all(not net.stages for net, _ in nets):
        return list(gens)
    return orbit_scan(word, nets, want_stabiliser=want_stabiliser)


def top_level_generators(stab: Sequence[Perm], n: int, m: int) -> list[Perm]:
    """Generators of ``Stab(L) x Sym(new atoms)`` on labels ``0 .. n+m-1``."""
    size = n + m
    gens = [tuple(g) + tuple(range(n, size)) for g in stab]
    gens += [transposition(size, i, i + 1) for i in range(n, size - 1)]
    return gens


def order_key(L: LevelledLattice) -> tuple[int, ...]:
    """Sort key realising the level-major order on lattices of one level profile."""
    key: list[int] = []
    for t in range(2, L.depth + 1):
        for d in range(t - 1, 0, -1):
            lev = L.level_mask(d)
            key.extend(L.cov[j] & lev for j in L.level(t))
    return tuple(key)


def compare_lattices(L1: LevelledLattice, L2: LevelledLattice) -> int:
    """-1, 0 or 1 as ``L1`` is below, equal to or above ``L2``."""
    if L1.level_starts != L2.level_starts:
        raise ValueError("lattices with different level profiles are not comparable")
    k1, k2 = order_key(L1), order_key(L2)
    return (k1 > k2) - (k1 < k2)
