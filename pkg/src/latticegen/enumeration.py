"""Orderly generation of canonical lattices, one new level at a time.

The tree is rooted at the 2-lattice.  The children of a canonical lattice
``L`` with ``n`` elements are the canonical lattices obtained by adding a
level of ``m`` atoms.  They are found by a backtrack search over the
restrictions ``U_i ∩ lev_d`` (outer loop over levels ``d = k .. 1``, inner
loop over the new atoms), pruning illegal partial choices and testing each
finished level for minimality under the current stabiliser.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from .canonical import BitLayout, level_min_test, top_level_generators
from .core import N_MAX, LevelledLattice, bits, serialize
from .permgroup import Perm

logger = logging.getLogger(__name__)

__all__ = [
    "MODES",
    "SearchNode",
    "ROOT",
    "EnumConfig",
    "CountTable",
    "children",
    "enumerate_lattices",
    "compose_counts",
    "TABLE_I",
    "TABLE_U",
]

MODES = ("all", "vi", "graded", "vi-graded")

# Published counts of vertically indecomposable (i_n) and all (u_n)
# unlabelled lattices, n = 1 .. 20.
TABLE_I = (
    1, 1, 0, 1, 2, 7, 27, 126, 664, 3954, 26190, 190754, 1514332, 12998035,
    119803771, 1178740932, 12316480222, 136060611189, 1582930919092,
    19328253734491,
)  # fmt: skip
TABLE_U = (
    1, 1, 1, 2, 5, 15, 53, 222, 1078, 5994, 37622, 262776, 2018305, 16873364,
    152233518, 1471613387, 15150569446, 165269824761, 1901910625578,
    23003059864006,
)  # fmt: skip


@dataclass(frozen=True)
class SearchNode:
    """A canonical lattice with generators of its level-preserving automorphism group."""

    lattice: LevelledLattice
    stab_gens: tuple[Perm, ...] = ()

    @property
    def n(self) -> int:
        return self.lattice.n


ROOT = SearchNode(LevelledLattice(2, (2,), (0, 0), (0, 0), ((0, 0), (0, 1))))


@dataclass
class EnumConfig:
    n_max: int
    mode: str = "all"
    threads: int = 1
    seed_size: int | None = None
    sink: Callable[[str], None] | None = None
    engine: str = "auto"

    def __post_init__(self) -> None:
        if not 2 <= self.n_max <= N_MAX:
            raise ValueError(f"n_max={self.n_max} outside 2..{N_MAX}")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.threads < 1:
            raise ValueError("threads must be positive")
        if self.seed_size is not None and not 2 <= self.seed_size <= self.n_max:
            raise ValueError(f"seed_size={self.seed_size} outside 2..{self.n_max}")
        if self.engine not in ("auto", "kernel", "python"):
            raise ValueError(f"unknown engine {self.engine!r}")


@dataclass
class CountTable:
    """Exact counts per lattice size; the row for ``n = 1`` is the constant 1."""

    mode: str
    n_max: int
    counts: dict[int, int] = field(default_factory=dict)

    def __getitem__(self, n: int) -> int:
        if n == 1:
            return 1
        return self.counts.get(n, 0)

    def rows(self) -> list[tuple[int, int]]:
        return [(n, self[n]) for n in range(1, self.n_max + 1)]

    def to_tsv(self) -> str:
        lines = [f"# mode={self.mode} max_n={self.n_max}"]
        lines += [f"{n}\t{c}" for n, c in self.rows()]
        return "\n".join(lines) + "\n"

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def _flags(mode: str) -> tuple[bool, bool]:
    return mode in ("vi", "vi-graded"), mode in ("graded", "vi-graded")


def _build_child(L: LevelledLattice, upsets: Sequence[int], cover_sets: Sequence[int]) -> LevelledLattice:
    """Child lattice from already-checked shades (no legality re-check)."""
    n, m = L.n, len(upsets)
    N = n + m
    table = [list(row) + [0] * m for row in L.meet] + [[0] * N for _ in range(m)]
    for t, U in enumerate(upsets):
        i = n + t
        table[i][i] = i
        table[i][1] = table[1][i] = i
        members = list(bits(U))
        for x in members:
            table[i][x] = table[x][i] = i
        for a in members:
            row = table[a]
            for b in members:
                if row[b] == 0:
                    row[b] = i
    return LevelledLattice(
        N,
        L.level_starts + (N,),
        L.cov + tuple(cover_sets),
        L.up + tuple(upsets),
        tuple(tuple(row) for row in table),
    )


def children(
    node: SearchNode,
    m: int,
    mode: str = "all",
    *,
    want_stabiliser: bool = True,
    early_abort: bool = True,
) -> Iterator[SearchNode]:
    """Canonical children of ``node`` whose new level holds ``m`` atoms.

    With ``early_abort=False`` every level test is deferred until the whole
    configuration is chosen; the output is the same.
    """
    L = node.lattice
    n, k = L.n, L.depth
    vi, graded = _flags(mode)
    gens_top = top_level_generators(node.stab_gens, n, m)

    if k == 0:
        # below the 2-lattice every new atom is covered by the top alone
        if vi and m == 1:
            return
        upsets = (0,) * m
        yield SearchNode(_build_child(L, upsets, (2,) * m), tuple(gens_top))
        return

    interior = L.interior
    levmask = [0] + [L.level_mask(d) for d in range(1, k + 1)]
    layouts = [None] + [BitLayout.of(L, d, m) for d in range(1, k + 1)]
    meet = L.meet
    up = L.up
    zero_meet = [0] * n
    for a in range(2, n):
        zero_meet[a] = sum(1 << b for b in range(2, n) if meet[a][b] == 0)

    U = [0] * m
    shade = [0] * m
    parts = [[0] * (k + 1) for _ in range(m)]

    def legal(t: int, d: int, P: int) -> bool:
        new = U[t] | P
        for a in bits(P):
            row = meet[a]
            for b in bits(new):
                c = row[b]
                if c and not new >> c & 1:
                    return False
        lev = levmask[d]
        for s in range(t):
            common = U[s] & new
            for a in bits(common & lev):
                if zero_meet[a] & common:
                    return False
        return True

    def pack(d: int) -> int:
        w = layouts[d].width
        base = layouts[d].base
        part = (1 << w) - 1
        word = 0
        for t in range(m):
            word = (word << w) | (parts[t][d] >> base & part)
        return word

    def finish(stab: Sequence[Perm]) -> Iterator[SearchNode]:
        upsets = tuple(U)
        if vi and m == 1 and upsets[0] == interior:
            return
        if not early_abort:
            gens: Sequence[Perm] | None = gens_top
            for d in range(k, 0, -1):
                gens = level_min_test(pack(d), gens, layouts[d], want_stabiliser=want_stabiliser or d > 1)
                if gens is None:
                    return
            stab = gens
        covers = []
        for t in range(m):
            Ut = upsets[t]
            covers.append(sum(1 << j for j in bits(Ut) if not any(up[x] >> j & 1 for x in bits(Ut))))
        child = _build_child(L, upsets, covers)
        yield SearchNode(child, tuple(stab) if want_stabiliser else ())

    def place(d: int, t: int, gens: Sequence[Perm]) -> Iterator[SearchNode]:
        if t == m:
            if graded and d == k:
                union = 0
                for s in range(m):
                    union |= parts[s][k]
                if union != levmask[k]:
                    return
            if early_abort:
                nxt = level_min_test(pack(d), gens, layouts[d], want_stabiliser=want_stabiliser or d > 1)
                if nxt is None:
                    return
            else:
                nxt = gens
            if d == 1:
                yield from finish(nxt)
            else:
                yield from place(d - 1, 0, nxt)
            return

        lev = levmask[d]
        forced = shade[t] & lev
        free = lev & ~forced
        floor = 0
        if early_abort and t > 0 and all(parts[t - 1][e] == parts[t][e] for e in range(d + 1, k + 1)):
            # swapping the two atoms is still in the group: keep blocks sorted
            floor = parts[t - 1][d]
        saved_U, saved_shade = U[t], shade[t]
        sub = 0
        while True:
            P = forced | sub
            if (P or d != k) and P >= floor and legal(t, d, P):
                closure = 0
                for a in bits(P):
                    closure |= up[a]
                U[t] = saved_U | P
                shade[t] = saved_shade | closure
                parts[t][d] = P
                yield from place(d, t + 1, gens)
                U[t], shade[t] = saved_U, saved_shade
                parts[t][d] = 0
            if sub == free or (graded and d < k):
                break
            sub = (sub - free) & free

    yield from place(k, 0, gens_top)


def _python_enumerate(config: EnumConfig) -> CountTable:
    table = CountTable(config.mode, config.n_max)
    counts = table.counts
    n_max = config.n_max
    sink = config.sink

    def visit(node: SearchNode) -> None:
        n = node.n
        counts[n] = counts.get(n, 0) + 1
        if sink is not None:
            sink(serialize(node.lattice))
        for m in range(1, n_max - n + 1):
            for child in children(node, m, config.mode, want_stabiliser=n + m < n_max):
                visit(child)

    visit(ROOT)
    for n in range(2, n_max + 1):
        counts.setdefault(n, 0)
    return table


def enumerate_lattices(config: EnumConfig) -> CountTable:
    """Count (and optionally emit) the canonical lattices of every size up to ``n_max``."""
    engine = config.engine
    if engine == "auto":
        engine = "kernel" if _kernel_available(config) else "python"
    if engine == "python":
        return _python_enumerate(config)
    from . import parallel

    return parallel.run(config)


def _kernel_available(config: EnumConfig) -> bool:
    try:
        from . import _kernel
    except ImportError:
        return False
    return config.n_max <= _kernel.NM


def compose_counts(indecomposable: Sequence[int]) -> list[int]:
    """Counts of all lattices from counts of vertically indecomposable ones.

    ``indecomposable[0]`` is ``i_1``.  Uses the unique decomposition of a
    lattice into a vertical sum of indecomposable pieces.
    """
    i = [0, *indecomposable]
    if len(i) < 2 or i[1] != 1:
        raise ValueError("the sequence must start with i_1 = 1")
    u = [0] * len(i)
    for n in range(1, len(i)):
        u[n] = i[n] + sum(i[m] * u[n - m + 1] for m in range(2, n))
    return u[1:]
