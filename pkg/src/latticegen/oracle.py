"""Brute-force reference implementations for testing.

Nothing here is tuned.  Lattice and poset predicates work on explicit order
relations rebuilt from covering sets, and isomorphism classes are found by
trying every level-preserving relabelling.  Only the legality test for a new
level is shared with the fast path.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import factorial, prod
from typing import Iterable, Mapping

from .canonical import compare_lattices
from .core import LevelledLattice, bits, level_preserving_perms, relabel
from .enumeration import MODES
from .extension import IllegalExtension, check_extension, extend

__all__ = [
    "Poset",
    "poset_of",
    "extended_poset",
    "is_lattice_naive",
    "depths",
    "is_vertically_decomposable",
    "is_graded_naive",
    "mode_predicate",
    "levellised_lattices",
    "canonical_key",
    "BruteResult",
    "brute",
    "is_canonical_exhaustive",
]

BRUTE_MAX = 8
CANON_MAX = 9

Poset = dict[int, frozenset[int]]
"""Covering sets of labels ``2 .. n-1``; an empty set means "covered by the top"."""


def poset_of(L: LevelledLattice) -> Poset:
    return {i: frozenset(j for j in bits(L.cov[i]) if j != 1) for i in range(2, L.n)}


def extended_poset(L: LevelledLattice, antichains: Iterable[Iterable[int]]) -> tuple[int, Poset]:
    """The poset obtained by adding atoms with the given covering sets, unchecked."""
    P = poset_of(L)
    n = L.n
    for A in antichains:
        P[n] = frozenset(a for a in A if a != 1)
        n += 1
    return n, P


def _order(n: int, P: Mapping[int, Iterable[int]]) -> list[list[bool]]:
    """``le[a][b]`` for the bounded poset on ``0 .. n-1``."""
    le = [[a == b for b in range(n)] for a in range(n)]
    for a in range(n):
        le[0][a] = True
        le[a][1] = True
    changed = True
    while changed:
        changed = False
        for i, ups in P.items():
            for j in ups:
                for x in range(n):
                    if le[j][x] and not le[i][x]:
                        le[i][x] = True
                        changed = True
    for i in range(2, n):
        for j in range(2, n):
            if i != j and le[i][j] and le[j][i]:
                raise ValueError("covering relation has a cycle")
    return le


def is_lattice_naive(n: int, P: Mapping[int, Iterable[int]]) -> bool:
    """Every pair has a greatest lower and a least upper bound."""
    try:
        le = _order(n, P)
    except ValueError:
        return False
    for a in range(n):
        for b in range(n):
            lower = [x for x in range(n) if le[x][a] and le[x][b]]
            if not any(all(le[y][g] for y in lower) for g in lower):
                return False
            upper = [x for x in range(n) if le[a][x] and le[b][x]]
            if not any(all(le[g][y] for y in upper) for g in upper):
                return False
    return True


def depths(n: int, P: Mapping[int, Iterable[int]]) -> list[int]:
    """Length of the longest chain from the top, minus one (top has depth 0)."""
    le = _order(n, P)
    dep = {1: 0}

    def depth(a: int) -> int:
        if a not in dep:
            above = [x for x in range(n) if x != a and le[a][x]]
            dep[a] = 1 + max(depth(x) for x in above)
        return dep[a]

    return [depth(a) for a in range(n)]


def is_vertically_decomposable(L: LevelledLattice) -> bool:
    le = _order(L.n, poset_of(L))
    return any(all(le[i][x] or le[x][i] for x in range(L.n)) for i in range(2, L.n))


def is_graded_naive(L: LevelledLattice) -> bool:
    """Depth drops by exactly one along every covering pair, bottom included."""
    n = L.n
    P = poset_of(L)
    dep = depths(n, P)
    le = _order(n, P)
    for a in range(n):
        for b in range(n):
            if a == b or not le[a][b]:
                continue
            if any(x not in (a, b) and le[a][x] and le[x][b] for x in range(n)):
                continue
            if dep[a] != dep[b] + 1:
                return False
    return True


def mode_predicate(mode: str):
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    vi = mode in ("vi", "vi-graded")
    graded = mode in ("graded", "vi-graded")

    def keep(L: LevelledLattice) -> bool:
        if vi and is_vertically_decomposable(L):
            return False
        if graded and not is_graded_naive(L):
            return False
        return True

    return keep


def _upclosed_sets(L: LevelledLattice) -> list[int]:
    """Up-closed interior sets meeting the deepest level (all of them for n = 2)."""
    members = list(range(2, L.n))
    k = L.depth
    deepest = L.level_mask(k) if k else 0
    out = []
    for flags in product((0, 1), repeat=len(members)):
        S = sum(f << j for f, j in zip(flags, members))
        if k and not S & deepest:
            continue
        if all(L.up[j] & ~S == 0 for j in bits(S)):
            out.append(S)
    return out


def levellised_lattices(n_max: int) -> dict[int, list[LevelledLattice]]:
    """Every labelled levellised lattice with at most ``n_max`` elements."""
    if n_max > BRUTE_MAX:
        raise ValueError(f"brute force is limited to n <= {BRUTE_MAX}")
    root = LevelledLattice.from_covers(2, [])
    by_size: dict[int, list[LevelledLattice]] = {n: [] for n in range(2, n_max + 1)}
    by_size[2].append(root)
    for n in range(2, n_max):
        for L in by_size[n]:
            cands = _upclosed_sets(L)
            for m in range(1, n_max - n + 1):
                for upsets in product(cands, repeat=m):
                    try:
                        check_extension(L, upsets)
                    except IllegalExtension:
                        continue
                    by_size[n + m].append(extend(L, upsets))
    return by_size


def canonical_key(L: LevelledLattice) -> tuple[int, ...]:
    """Covering matrix read block by block: levels top-down, each level's
    columns deepest-first, rows in label order, each row as a weight."""
    levels = [list(L.level(d)) for d in range(1, L.depth + 1)]
    out = []
    for t in range(1, len(levels)):
        for d in range(t - 1, -1, -1):
            cols = set(levels[d])
            for i in levels[t]:
                out.append(sum(2**j for j in L.covers_of(i) if j in cols))
    return tuple(out)


@dataclass
class BruteResult:
    n: int
    mode: str
    count: int
    representatives: list[LevelledLattice]


def brute(n: int, mode: str = "all") -> BruteResult:
    """Isomorphism classes of ``n``-lattices by exhaustive relabelling."""
    if n > BRUTE_MAX:
        raise ValueError(f"brute force is limited to n <= {BRUTE_MAX}")
    keep = mode_predicate(mode)
    labelled = levellised_lattices(n)[n] if n >= 2 else []
    seen: set[tuple[int, ...]] = set()
    reps = []
    for L in labelled:
        if L.cov in seen:
            continue
        orbit = [relabel(L, pi) for pi in level_preserving_perms(L)]
        seen.update(X.cov for X in orbit)
        if keep(L):
            reps.append(min(orbit, key=lambda X: (canonical_key(X), X.cov)))
    reps.sort(key=lambda X: (X.level_starts, canonical_key(X)))
    return BruteResult(n, mode, len(reps), reps)


def is_canonical_exhaustive(L: LevelledLattice) -> bool:
    """No level-preserving relabelling of ``L`` is smaller in the level-major order."""
    if L.n > CANON_MAX:
        raise ValueError(f"exhaustive canonicity check is limited to n <= {CANON_MAX}")
    if prod(factorial(w) for w in L.level_widths()) == 1:
        return True
    return all(compare_lattices(relabel(L, pi), L) >= 0 for pi in level_preserving_perms(L))
