"""Adding a whole new bottom level of atoms to a levellised lattice.

A new atom is described by the up-closed interior set ``U`` of elements above
it (its shade without the top).  The covering set is recovered as the minimal
elements of ``U``, or ``{1}`` when ``U`` is empty.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import LevelledLattice, bits, minimal_elements, shade_closure

__all__ = [
    "IllegalExtension",
    "ExtensionSpec",
    "antichain_of",
    "is_up_closed",
    "is_lattice_antichain",
    "pairwise_compatible",
    "check_extension",
    "extend",
    "child_is_vi",
    "child_is_graded",
]

TOP = 1 << 1


class IllegalExtension(ValueError):
    pass


def antichain_of(L: LevelledLattice, U: int) -> int:
    """Covering set (as a mask, top is bit 1) of a new atom with shade ``U``."""
    return minimal_elements(L, U) if U else TOP


def is_up_closed(L: LevelledLattice, U: int) -> bool:
    return shade_closure(L, U) == U


def is_lattice_antichain(L: LevelledLattice, A: int) -> bool:
    """Whether the antichain ``A`` may serve as the covering set of a new atom.

    Only the pairs of the shade that are minimal among those with a nonzero
    meet are tested; up-closure of the shade takes care of the rest.
    """
    if A == TOP:
        return True
    U = shade_closure(L, A & ~TOP)
    members = list(bits(U))
    pairs = [(a, b) for a in members for b in members if a <= b and L.meet[a][b] != 0]
    for a, b in pairs:
        if any(
            (x, y) != (a, b)
            and (L.leq(x, a) and L.leq(y, b) or L.leq(x, b) and L.leq(y, a))
            for x, y in pairs
        ):
            continue
        if not U >> L.meet[a][b] & 1:
            return False
    return True


def pairwise_compatible(L: LevelledLattice, Ui: int, Uj: int) -> bool:
    common = Ui & Uj
    return all(L.meet[a][b] != 0 for a in bits(common) for b in bits(common))


def check_extension(L: LevelledLattice, upsets: Sequence[int]) -> None:
    """Raise :class:`IllegalExtension` unless the new level is legal."""
    if not upsets:
        raise IllegalExtension("at least one new atom is required")
    k = L.depth
    deepest = L.level_mask(k) if k else 0
    for i, U in enumerate(upsets):
        if U & ~L.interior or not is_up_closed(L, U):
            raise IllegalExtension(f"set {i} is not an up-closed interior set")
        if k and not U & deepest:
            raise IllegalExtension(f"atom {L.n + i} misses the deepest level")
        if not is_lattice_antichain(L, antichain_of(L, U)):
            raise IllegalExtension(f"atom {L.n + i} does not have a lattice-antichain as covers")
    for i in range(len(upsets)):
        for j in range(i + 1, len(upsets)):
            if not pairwise_compatible(L, upsets[i], upsets[j]):
                raise IllegalExtension(f"atoms {L.n + i} and {L.n + j} share a pair with meet 0")


def extend(L: LevelledLattice, upsets: Sequence[int]) -> LevelledLattice:
    """The lattice with new atoms ``n .. n+m-1`` whose shades are ``upsets``."""
    check_extension(L, upsets)
    n, m = L.n, len(upsets)
    N = n + m
    cov = list(L.cov) + [antichain_of(L, U) for U in upsets]
    up = list(L.up) + list(upsets)

    table = [list(row) + [0] * m for row in L.meet] + [[0] * N for _ in range(m)]
    for t, U in enumerate(upsets):
        i = n + t
        table[i][i] = i
        table[i][1] = table[1][i] = i
        for x in bits(U):
            table[i][x] = table[x][i] = i
        # pairs of U without a common lower bound in L now meet at i
        for a in bits(U):
            for b in bits(U):
                if table[a][b] == 0:
                    table[a][b] = i
    return LevelledLattice(
        N,
        L.level_starts + (N,),
        tuple(cov),
        tuple(up),
        tuple(tuple(row) for row in table),
    )


@dataclass(frozen=True)
class ExtensionSpec:
    """A base lattice plus the shades of the atoms of a new bottom level."""

    base: LevelledLattice
    upsets: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.upsets)

    def antichains(self) -> tuple[int, ...]:
        return tuple(antichain_of(self.base, U) for U in self.upsets)

    def is_legal(self) -> bool:
        try:
            check_extension(self.base, self.upsets)
        except IllegalExtension:
            return False
        return True

    def build(self) -> LevelledLattice:
        return extend(self.base, self.upsets)


def child_is_vi(L: LevelledLattice, upsets: Sequence[int]) -> bool:
    """Whether the child of a vertically indecomposable ``L`` stays indecomposable."""
    return not (len(upsets) == 1 and upsets[0] == L.interior)


def child_is_graded(L: LevelledLattice, upsets: Sequence[int]) -> bool:
    """Whether the child of a graded ``L`` is graded.

    Every new atom must be covered only by elements of the deepest level of
    ``L``, and together they must cover all of it.
    """
    k = L.depth
    deepest = L.level_mask(k) if k else TOP
    union = 0
    for U in upsets:
        A = antichain_of(L, U)
        if A & ~deepest:
            return False
        union |= A
    return union == deepest
