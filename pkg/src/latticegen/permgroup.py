"""Permutations of labels, bit permutations of packed words, orbit scans.

A permutation is a tuple ``p`` with ``p[i]`` the image of ``i``.  Products
compose right to left: ``compose(g, h)`` applies ``h`` first.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

Perm = tuple[int, ...]

__all__ = [
    "Perm",
    "identity",
    "compose",
    "inverse",
    "is_identity",
    "transposition",
    "cycle",
    "BenesNetwork",
    "benes_compile",
    "benes_apply",
    "permute_bits",
    "orbit_scan",
    "JerrumFilter",
    "jerrum_reduce",
    "group_closure",
]


def identity(size: int) -> Perm:
    return tuple(range(size))


def compose(g: Perm, h: Perm) -> Perm:
    return tuple(g[x] for x in h)


def inverse(g: Perm) -> Perm:
    out = [0] * len(g)
    for i, x in enumerate(g):
        out[x] = i
    return tuple(out)


def is_identity(g: Perm) -> bool:
    return all(i == x for i, x in enumerate(g))


def transposition(size: int, a: int, b: int) -> Perm:
    p = list(range(size))
    p[a], p[b] = b, a
    return tuple(p)


def cycle(size: int, *points: int) -> Perm:
    p = list(range(size))
    for a, b in zip(points, points[1:] + points[:1]):
        p[a] = b
    return tuple(p)


# -- Beneš networks ---------------------------------------------------------


@dataclass(frozen=True)
class BenesNetwork:
    """Masked delta-swap stages; stage ``(mask, s)`` exchanges bits ``p`` and ``p+s`` for ``p`` in ``mask``."""

    width: int
    stages: tuple[tuple[int, int], ...]

    def __call__(self, word: int) -> int:
        return benes_apply(self, word)


def _check_bijection(perm: Sequence[int], width: int) -> None:
    if len(perm) != width or sorted(perm) != list(range(width)):
        raise ValueError(f"not a permutation of 0..{width - 1}: {list(perm)}")


def _benes_layers(perm: list[int], half: int) -> list[int]:
    """Masks for shifts ``half, half/2, .., 1, .., half`` realising ``perm``."""
    if half == 1:
        return [1 if perm[0] == 1 else 0]
    width = 2 * half
    inv = [0] * width
    for p, y in enumerate(perm):
        inv[y] = p
    side = [-1] * width
    for start in range(width):
        p = start
        while side[p] < 0:
            side[p] = 0
            q = p ^ half
            side[q] = 1
            p = inv[perm[q] ^ half]
    first = last = 0
    lo = [0] * half
    hi = [0] * half
    for p in range(width):
        y = perm[p]
        if side[p]:
            hi[p % half] = y % half
        else:
            lo[p % half] = y % half
            if y >= half:
                last |= 1 << (y % half)
        if p < half and side[p]:
            first |= 1 << p
    inner_lo = _benes_layers(lo, half // 2)
    inner_hi = _benes_layers(hi, half // 2)
    inner = [a | b << half for a, b in zip(inner_lo, inner_hi)]
    return [first, *inner, last]


def benes_compile(bit_perm: Sequence[int], width: int | None = None) -> BenesNetwork:
    """Compile a bit permutation: bit ``p`` of the input lands on bit ``bit_perm[p]``."""
    if width is None:
        width = len(bit_perm)
    _check_bijection(bit_perm, width)
    if width <= 1:
        return BenesNetwork(width, ())
    size = 1 << (width - 1).bit_length()
    padded = list(bit_perm) + list(range(width, size))
    masks = _benes_layers(padded, size // 2)
    t = len(masks) // 2
    shifts = [size >> (1 + j) for j in range(t)] + [1] + [size >> (t - j) for j in range(t)]
    stages = tuple((mask, s) for mask, s in zip(masks, shifts) if mask)
    return BenesNetwork(width, stages)


def benes_apply(net: BenesNetwork, word: int) -> int:
    for mask, s in net.stages:
        t = ((word >> s) ^ word) & mask
        word ^= t ^ (t << s)
    return word


def permute_bits(bit_perm: Sequence[int], word: int) -> int:
    """Direct (slow) bit permutation, the reference for :func:`benes_apply`."""
    out = 0
    for p, q in enumerate(bit_perm):
        if word >> p & 1:
            out |= 1 << q
    return out


# -- Jerrum's filter ---------------------------------------------------------


class JerrumFilter:
    """Keeps a generating set whose edges ``{i, g(i)}`` form a forest.

    ``i`` is the least point moved by generator ``g``.  A generator closing a
    cycle is traded for the product around that cycle, which fixes a larger
    initial segment of points; this repeats until the graph is acyclic again.
    """

    def __init__(self, size: int):
        self.size = size
        self.edges: dict[frozenset[int], Perm] = {}
        self.adj: dict[int, set[int]] = {}

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def generators(self) -> list[Perm]:
        return list(self.edges.values())

    def _path(self, a: int, b: int) -> list[int] | None:
        prev = {a: a}
        queue = deque([a])
        while queue:
            x = queue.popleft()
            if x == b:
                path = [b]
                while path[-1] != a:
                    path.append(prev[path[-1]])
                return path[::-1]
            for y in self.adj.get(x, ()):
                if y not in prev:
                    prev[y] = x
                    queue.append(y)
        return None

    def _link(self, a: int, b: int, g: Perm) -> None:
        self.edges[frozenset((a, b))] = g
        self.adj.setdefault(a, set()).add(b)
        self.adj.setdefault(b, set()).add(a)

    def _unlink(self, a: int, b: int) -> None:
        del self.edges[frozenset((a, b))]
        self.adj[a].discard(b)
        self.adj[b].discard(a)

    def add(self, g: Perm) -> None:
        while True:
            i = next((x for x, y in enumerate(g) if x != y), None)
            if i is None:
                return
            j = g[i]
            path = self._path(j, i)
            if path is None:
                self._link(i, j, g)
                return
            # the new edge i-j closes the cycle i, j, .., i; walk it from its
            # least vertex k, where every label fixes all points below k
            ring = [i] + path[:-1]
            r = len(ring)
            labels = [g] + [self.edges[frozenset((x, y))] for x, y in zip(path, path[1:])]
            t0 = ring.index(min(ring))
            h = identity(len(g))
            for t in range(t0, t0 + r):
                x, y = ring[t % r], ring[(t + 1) % r]
                e = labels[t % r]
                h = compose(e if e[x] == y else inverse(e), h)
            # h fixes k; drop the first edge of the walk, keep the rest
            if t0 != 0:
                self._unlink(ring[t0], ring[(t0 + 1) % r])
                self._link(i, j, g)
            g = h


def jerrum_reduce(gens: Iterable[Perm], moved_points: Iterable[int] | None = None) -> list[Perm]:
    """An equivalent generating set with fewer elements than there are moved points.

    ``moved_points``, when given, must contain every point moved by ``gens``.
    """
    gens = list(gens)
    if moved_points is not None:
        allowed = set(moved_points)
        stray = {x for g in gens for x, y in enumerate(g) if x != y} - allowed
        if stray:
            raise ValueError(f"generators move points {sorted(stray)} outside moved_points")
    if not gens:
        return []
    filt = JerrumFilter(len(gens[0]))
    for g in gens:
        filt.add(g)
    return filt.generators


# -- orbits ---------------------------------------------------------------


def orbit_scan(
    word: int,
    gens: Sequence[tuple[BenesNetwork, Perm]],
    *,
    want_stabiliser: bool = True,
) -> list[Perm] | None:
    """Breadth-first scan of the orbit of ``word``.

    Returns ``None`` as soon as an image smaller than ``word`` turns up.
    Otherwise ``word`` is the orbit minimum and the result is a generating
    set of its stabiliser (Schreier generators, filtered), or ``[]`` when
    ``want_stabiliser`` is false.
    """
    if not gens:
        return []
    size = len(gens[0][1])
    transversal: dict[int, Perm] = {word: identity(size)}
    queue = deque([word])
    filt = JerrumFilter(size) if want_stabiliser else None
    while queue:
        x = queue.popleft()
        ux = transversal[x]
        for net, g in gens:
            y = benes_apply(net, x)
            if y < word:
                return None
            gux = compose(g, ux)
            uy = transversal.get(y)
            if uy is None:
                transversal[y] = gux
                queue.append(y)
            elif filt is not None:
                filt.add(compose(inverse(uy), gux))
    return filt.generators if filt is not None else []


def group_closure(gens: Sequence[Perm], size: int | None = None, limit: int = 10**6) -> set[Perm]:
    """All elements of the group generated by ``gens`` (test-sized groups only)."""
    if size is None:
        size = len(gens[0]) if gens else 0
    e = identity(size)
    seen = {e}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = compose(g, x)
            if y not in seen:
                seen.add(y)
                if len(seen) > limit:
                    raise ValueError(f"group order exceeds {limit}")
                queue.append(y)
    return seen
