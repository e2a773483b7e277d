"""Levellised n-lattices.

Elements are labelled ``0 .. n-1`` with ``0`` the bottom and ``1`` the top.
The remaining (interior) labels are grouped into levels by depth, each level
occupying a consecutive label range, with shallower levels first.  Label sets
are plain ``int`` bit masks: label ``j`` is bit ``j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product
from typing import Iterable, Iterator, Sequence

N_MAX = 24

__all__ = [
    "N_MAX",
    "InvalidLattice",
    "LevelledLattice",
    "bits",
    "mask_of",
    "validate",
    "meet",
    "shade_closure",
    "minimal_elements",
    "parent",
    "serialize",
    "deserialize",
    "level_preserving_perms",
    "relabel",
]


class InvalidLattice(ValueError):
    """Raised when a structure fails one of the levellised-lattice invariants.

    ``kind`` is one of ``"format"``, ``"level"``, ``"cover"``, ``"up-set"``,
    ``"not-a-lattice"`` or ``"meet-table"``.
    """

    def __init__(self, kind: str, message: str):
        super().__init__(f"{kind}: {message}")
        self.kind = kind


def bits(mask: int) -> Iterator[int]:
    """Yield the positions of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(labels: Iterable[int]) -> int:
    out = 0
    for j in labels:
        out |= 1 << j
    return out


@dataclass(frozen=True)
class LevelledLattice:
    """An immutable levellised n-lattice.

    ``cov[i]`` is the bit mask of labels covering ``i`` (entries for 0 and 1
    are 0; covers of and by the bottom are implicit).  ``up[i]`` is the strict
    interior shade of ``i``; the top is an implicit member of every shade.
    ``meet`` is the full ``n x n`` meet table.

    The constructor stores what it is given.  Use :meth:`from_covers` or
    :func:`deserialize` to build a checked instance.
    """

    n: int
    level_starts: tuple[int, ...]
    cov: tuple[int, ...]
    up: tuple[int, ...]
    meet: tuple[tuple[int, ...], ...]

    @classmethod
    def from_covers(
        cls,
        n: int,
        covers: Sequence[Iterable[int]],
        level_starts: Sequence[int] | None = None,
    ) -> LevelledLattice:
        """Build and validate a lattice from the covering sets of ``2 .. n-1``.

        ``covers[i - 2]`` lists the labels covering ``i``.  When
        ``level_starts`` is omitted it is derived from the depths.
        """
        if n < 2 or n > N_MAX:
            raise InvalidLattice("format", f"n={n} outside 2..{N_MAX}")
        if len(covers) != n - 2:
            raise InvalidLattice("format", f"expected {n - 2} covering sets, got {len(covers)}")
        cov = [0, 0] + [mask_of(c) for c in covers]
        for i in range(2, n):
            if cov[i] == 0 or cov[i] >> n or cov[i] & 1:
                raise InvalidLattice("cover", f"covering set of {i} is empty or out of range")
            if any(j >= i for j in bits(cov[i] & ~2)):
                raise InvalidLattice("level", f"{i} is covered by a label that is not smaller")
        depth = _depths(n, cov)
        if level_starts is None:
            level_starts = _starts_from_depths(n, depth)
        up = _up_sets(n, cov)
        table = _meet_table(n, up)
        lat = cls(n, tuple(level_starts), tuple(cov), tuple(up), table)
        validate(lat)
        return lat

    # -- level structure -------------------------------------------------

    @property
    def depth(self) -> int:
        """Number of interior levels (the depth of label ``n - 1``)."""
        return len(self.level_starts) - 1

    def level(self, d: int) -> range:
        """Labels of interior level ``d`` (``1 <= d <= depth``)."""
        return range(self.level_starts[d - 1], self.level_starts[d])

    def level_mask(self, d: int) -> int:
        lo, hi = self.level_starts[d - 1], self.level_starts[d]
        return ((1 << hi) - 1) & ~((1 << lo) - 1)

    def level_widths(self) -> tuple[int, ...]:
        s = self.level_starts
        return tuple(s[d + 1] - s[d] for d in range(len(s) - 1))

    def depth_of(self, i: int) -> int:
        if i == 1:
            return 0
        if i == 0:
            return self.depth + 1
        for d in range(1, self.depth + 1):
            if i < self.level_starts[d]:
                return d
        raise ValueError(f"label {i} out of range")

    @property
    def interior(self) -> int:
        return ((1 << self.n) - 1) & ~3

    def covers_of(self, i: int) -> tuple[int, ...]:
        return tuple(bits(self.cov[i]))

    def leq(self, a: int, b: int) -> bool:
        """Order relation ``a <= b``."""
        if a == b or a == 0 or b == 1:
            return True
        if a == 1 or b == 0:
            return False
        return bool(self.up[a] >> b & 1)

    def __repr__(self) -> str:
        return f"LevelledLattice({serialize(self)!r})"


def _depths(n: int, cov: Sequence[int]) -> list[int]:
    depth = [0] * n
    for i in range(2, n):
        depth[i] = 1 + max(depth[j] for j in bits(cov[i]))
    return depth


def _starts_from_depths(n: int, depth: Sequence[int]) -> tuple[int, ...]:
    if n == 2:
        return (2,)
    starts = [2]
    for i in range(2, n):
        if depth[i] < depth[i - 1] and i > 2:
            raise InvalidLattice("level", f"depth decreases at label {i}")
        if i > 2 and depth[i] != depth[i - 1]:
            if depth[i] != depth[i - 1] + 1:
                raise InvalidLattice("level", f"depth jumps at label {i}")
            starts.append(i)
    if n > 2 and depth[2] != 1:
        raise InvalidLattice("level", "label 2 is not on level 1")
    starts.append(n)
    return tuple(starts)


def _up_sets(n: int, cov: Sequence[int]) -> list[int]:
    # covers always point to smaller labels, so one ascending pass suffices
    up = [0] * n
    for i in range(2, n):
        acc = 0
        for j in bits(cov[i] & ~2):
            acc |= (1 << j) | up[j]
        up[i] = acc
    return up


def _down_sets(n: int, up: Sequence[int]) -> list[int]:
    down = [0] * n
    for i in range(2, n):
        for j in bits(up[i]):
            down[j] |= 1 << i
    return down


def _meet_table(n: int, up: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    """Meets from interior up-sets; ``-1`` marks a pair without a unique meet."""
    down = _down_sets(n, up)
    table = [[0] * n for _ in range(n)]
    for a in range(n):
        table[a][1] = table[1][a] = a
    for a in range(2, n):
        for b in range(a, n):
            lower = (down[a] | 1 << a) & (down[b] | 1 << b)
            g = 0
            for c in bits(lower):
                if lower & ~(down[c] | 1 << c) == 0:
                    g = c
                    break
            else:
                if lower:
                    g = -1
            table[a][b] = table[b][a] = g
    return tuple(tuple(row) for row in table)


def validate(L: LevelledLattice) -> None:
    """Check every invariant of a levellised n-lattice.

    Returns ``None`` when ``L`` is valid; raises :class:`InvalidLattice`
    describing the first violated invariant otherwise.  Joins are computed
    on the fly from the up-sets.
    """
    n = L.n
    if not 2 <= n <= N_MAX:
        raise InvalidLattice("format", f"n={n} outside 2..{N_MAX}")
    s = L.level_starts
    if not s or s[0] != 2 or s[-1] != n or any(a >= b for a, b in zip(s, s[1:])):
        raise InvalidLattice("level", f"bad level boundaries {s}")
    if len(L.cov) != n or len(L.up) != n or len(L.meet) != n:
        raise InvalidLattice("format", "table sizes do not match n")

    depth = [0] * n
    for d in range(1, len(s)):
        for i in range(s[d - 1], s[d]):
            depth[i] = d
    for i in range(2, n):
        c = L.cov[i]
        if c == 0 or c & 1 or c >> n:
            raise InvalidLattice("cover", f"covering set of {i} is empty or out of range")
        if c & 2 and c != 2:
            raise InvalidLattice("cover", f"{i} is covered by the top and by another element")
        ds = [depth[j] for j in bits(c)]
        if max(ds) != depth[i] - 1:
            raise InvalidLattice(
                "level", f"label {i} sits on level {depth[i]} but its longest chain says {max(ds) + 1}"
            )

    up = _up_sets(n, L.cov)
    for i in range(2, n):
        if L.up[i] != up[i]:
            raise InvalidLattice("up-set", f"up-set of {i} is not the closure of its covers")
        c = L.cov[i] & ~2
        for j in bits(c):
            if up[j] & c:
                raise InvalidLattice("cover", f"covering set of {i} is not an antichain")

    down = _down_sets(n, up)
    full_up = [up[i] | 1 << i | 2 for i in range(n)]
    full_up[0] = (1 << n) - 1
    full_up[1] = 2
    full_down = [down[i] | 1 << i | 1 for i in range(n)]
    full_down[0] = 1
    full_down[1] = (1 << n) - 1
    for a in range(2, n):
        for b in range(a + 1, n):
            for bound, sets in ((full_down[a] & full_down[b], full_down), (full_up[a] & full_up[b], full_up)):
                if not any(bound & ~sets[c] == 0 for c in bits(bound)):
                    raise InvalidLattice("not-a-lattice", f"pair ({a}, {b}) has no unique meet or join")

    table = _meet_table(n, up)
    for a in range(n):
        for b in range(n):
            if L.meet[a][b] != table[a][b]:
                raise InvalidLattice(
                    "meet-table", f"meet({a}, {b}) stored as {L.meet[a][b]}, expected {table[a][b]}"
                )


def meet(L: LevelledLattice, a: int, b: int) -> int:
    if not (0 <= a < L.n and 0 <= b < L.n):
        raise IndexError(f"labels ({a}, {b}) out of range for n={L.n}")
    return L.meet[a][b]


def shade_closure(L: LevelledLattice, S: int) -> int:
    """Smallest up-closed interior set containing the interior set ``S``."""
    out = S
    for i in bits(S):
        out |= L.up[i]
    return out


def minimal_elements(L: LevelledLattice, U: int) -> int:
    """The antichain whose shade closure is the up-closed set ``U``."""
    out = 0
    for j in bits(U):
        if not any(L.up[u] >> j & 1 for u in bits(U)):
            out |= 1 << j
    return out


def parent(L: LevelledLattice) -> LevelledLattice:
    """Remove the deepest interior level."""
    if L.n == 2:
        raise ValueError("the 2-lattice has no parent")
    p = L.level_starts[-2]
    meet_rows = tuple(tuple(x if x < p else 0 for x in row[:p]) for row in L.meet[:p])
    return LevelledLattice(p, L.level_starts[:-1], L.cov[:p], L.up[:p], meet_rows)


def serialize(L: LevelledLattice) -> str:
    """One-line record ``N|w_1,...,w_k|c_2:...:c_{N-1}``."""
    widths = ",".join(str(w) for w in L.level_widths())
    covers = ":".join(",".join(str(j) for j in bits(L.cov[i])) for i in range(2, L.n))
    return f"{L.n}|{widths}|{covers}"


def deserialize(record: str) -> LevelledLattice:
    line = record.rstrip("\n")
    parts = line.split("|")
    if len(parts) != 3:
        raise InvalidLattice("format", f"expected 3 fields in {line!r}")
    try:
        n = int(parts[0])
        widths = [int(w) for w in parts[1].split(",")] if parts[1] else []
        covers = [[int(j) for j in c.split(",")] for c in parts[2].split(":")] if parts[2] else []
    except ValueError as exc:
        raise InvalidLattice("format", f"non-integer field in {line!r}") from exc
    if any(w <= 0 for w in widths) or sum(widths) != n - 2:
        raise InvalidLattice("format", f"level widths {widths} do not sum to {n - 2}")
    starts = [2]
    for w in widths:
        starts.append(starts[-1] + w)
    lat = LevelledLattice.from_covers(n, covers, starts)
    if serialize(lat) != line:
        raise InvalidLattice("format", f"record {line!r} is not in normal form")
    return lat


def level_preserving_perms(L: LevelledLattice) -> Iterator[tuple[int, ...]]:
    """Every relabelling of ``L`` that maps each level onto itself."""
    blocks = [list(L.level(d)) for d in range(1, L.depth + 1)]
    for choice in product(*(permutations(b) for b in blocks)):
        p = [0, 1]
        for images in choice:
            p.extend(images)
        yield tuple(p)


def relabel(L: LevelledLattice, pi: Sequence[int]) -> LevelledLattice:
    """The lattice ``pi(L)``: label ``i`` of ``L`` becomes ``pi[i]``."""
    covers: list[list[int]] = [[] for _ in range(L.n - 2)]
    for i in range(2, L.n):
        covers[pi[i] - 2] = sorted(pi[j] for j in bits(L.cov[i]))
    return LevelledLattice.from_covers(L.n, covers, L.level_starts)
