"""Compiled search engine (numba).

Same algorithm as :func:`latticegen.enumeration.children`, on flat arrays.
Lattices with up to ``NM`` elements; packed level words stay below 2**63 so
all arithmetic is signed 64-bit.

A node record (``int64`` row) holds ``n``, ``k``, the generator count, the
level boundaries, the covering masks and optionally the generators::

    [0] n  [1] k  [2] ngens  [3 : 3+NM+1] starts  [COV0 : COV0+NM] cov
    [ORD0] automorphism group order  [GEN0 : GEN0 + MAXG*NM] generators
"""

from __future__ import annotations

import numpy as np
from numba import njit

NM = 17
MAXG = NM + 2
MAXST = 11
COV0 = 3 + NM + 1
ORD0 = COV0 + NM
GEN0 = ORD0 + 1
REC_LIGHT = GEN0
REC_FULL = GEN0 + MAXG * NM

TOP = 2

# return codes
OK = 0
EMIT_FULL = -1
ORBIT_FULL = -2
STACK_FULL = -3

# stats slots
ST_TESTS = 0
ST_ORBIT = 1
ST_CANDS = 2
ST_SCHREIER = 3


class Scratch:
    """Per-worker work arrays; sizes are powers of two and can be grown."""

    def __init__(self, orbit_cap: int = 1 << 14, stack_cap: int = 1 << 14, emit_cap: int = 0, rec_width: int = REC_LIGHT):
        self.orbit_cap = orbit_cap
        self.stack_cap = stack_cap
        self.emit_cap = emit_cap
        self.rec_width = rec_width
        self.alloc()

    def alloc(self) -> None:
        oc = self.orbit_cap
        self.orb_word = np.zeros(oc, np.int64)
        self.orb_perm = np.zeros((oc, NM), np.int8)
        self.orb_inv = np.zeros((oc, NM), np.int8)
        self.orb_pos = np.zeros(oc, np.int64)
        self.hidx = np.full(2 * oc, -1, np.int64)
        sc = self.stack_cap
        self.st_lv = np.zeros(sc, np.int64)
        self.st_up = np.zeros((sc, NM), np.int64)
        self.st_m = np.zeros(sc, np.int64)
        self.st_ng = np.zeros(sc, np.int64)
        self.st_ord = np.zeros(sc, np.int64)
        self.st_gens = np.zeros((sc, MAXG, NM), np.int8)
        self.emit = np.zeros((max(self.emit_cap, 1), self.rec_width), np.int64)

    def arrays(self):
        return (
            self.orb_word, self.orb_perm, self.orb_inv, self.orb_pos, self.hidx,
            self.st_lv, self.st_up, self.st_m, self.st_ng, self.st_ord, self.st_gens,
            self.emit,
        )  # fmt: skip


# -- Beneš networks -----------------------------------------------------------


@njit(cache=True, nogil=True)
def benes_compile(bp, W, masks, shifts, work):
    """Compile bit permutation ``bp[:W]`` into stages; returns the stage count."""
    size = 1
    t = 0
    while size < W:
        size <<= 1
        t += 1
    if size < 2:
        return 0
    cur = work[0]
    nxt = work[1]
    inv = work[2]
    side = work[3]
    first = work[4]
    last = work[5]
    for p in range(size):
        cur[p] = bp[p] if p < W else p
    half = size >> 1
    r = 0
    while half >= 2:
        for p in range(size):
            inv[cur[p]] = p
            side[p] = -1
        for start in range(size):
            p = start
            while side[p] < 0:
                side[p] = 0
                q = p ^ half
                side[q] = 1
                p = inv[cur[q] ^ half]
        fm = 0
        lm = 0
        for p in range(size):
            y = cur[p]
            s = side[p]
            if s == 1 and (p & half) == 0:
                fm |= 1 << p
            if s == 0 and (y & half) != 0:
                lm |= 1 << (y & ~half)
            if s == 1:
                nxt[p | half] = y | half
            else:
                nxt[p & ~half] = y & ~half
        first[r] = fm
        last[r] = lm
        for p in range(size):
            cur[p] = nxt[p]
        half >>= 1
        r += 1
    mid = 0
    for p in range(0, size, 2):
        if cur[p] == p + 1:
            mid |= 1 << p
    ns = 0
    for j in range(t - 1):
        if first[j] != 0:
            masks[ns] = first[j]
            shifts[ns] = size >> (j + 1)
            ns += 1
    if mid != 0:
        masks[ns] = mid
        shifts[ns] = 1
        ns += 1
    for j in range(t - 2, -1, -1):
        if last[j] != 0:
            masks[ns] = last[j]
            shifts[ns] = size >> (j + 1)
            ns += 1
    return ns


@njit(cache=True, nogil=True, inline="always")
def benes_apply(x, masks, shifts, ns):
    for i in range(ns):
        s = shifts[i]
        t = ((x >> s) ^ x) & masks[i]
        x ^= t ^ (t << s)
    return x


# -- Jerrum's filter -------------------------------------------------------------


@njit(cache=True, nogil=True)
def _jerrum_add(s, N, jg, ja, jb, jcount, prev, queue, ring, ring_e, h, tmp):
    """Insert permutation ``s[:N]`` (clobbered) into the filter; returns the new edge count."""
    while True:
        i = -1
        for x in range(N):
            if s[x] != x:
                i = x
                break
        if i < 0:
            return jcount
        j = s[i]
        # path j -> i in the forest
        for x in range(N):
            prev[x] = -1
        prev[j] = j
        head = 0
        tail = 1
        queue[0] = j
        while head < tail:
            x = queue[head]
            head += 1
            if x == i:
                break
            for e in range(jcount):
                y = -1
                if ja[e] == x:
                    y = jb[e]
                elif jb[e] == x:
                    y = ja[e]
                if y >= 0 and prev[y] < 0:
                    prev[y] = x
                    queue[tail] = y
                    tail += 1
        if prev[i] < 0:
            for x in range(N):
                jg[jcount, x] = s[x]
            ja[jcount] = i
            jb[jcount] = j
            return jcount + 1
        # ring = i, j, .., (vertex before i); ring_e[t] = edge from ring[t] to ring[t+1]
        plen = 0
        x = i
        while x != j:
            tmp[plen] = x
            plen += 1
            x = prev[x]
        tmp[plen] = j
        plen += 1
        # tmp holds i .. j (reverse of path j .. i)
        r = plen
        ring[0] = i
        for t in range(1, r):
            ring[t] = tmp[r - t]
        ring_e[0] = -1
        for t in range(1, r):
            a = ring[t]
            b = ring[(t + 1) % r]
            for e in range(jcount):
                if (ja[e] == a and jb[e] == b) or (ja[e] == b and jb[e] == a):
                    ring_e[t] = e
                    break
        t0 = 0
        for t in range(r):
            if ring[t] < ring[t0]:
                t0 = t
        for x in range(N):
            h[x] = x
        for u in range(t0, t0 + r):
            a = ring[u % r]
            b = ring[(u + 1) % r]
            e = ring_e[u % r]
            if e < 0:
                fwd = s[a] == b
                for x in range(N):
                    hx = h[x]
                    if fwd:
                        h[x] = s[hx]
                    else:
                        # inverse of s applied to hx
                        for z in range(N):
                            if s[z] == hx:
                                h[x] = z
                                break
            else:
                fwd = jg[e, a] == b
                for x in range(N):
                    hx = h[x]
                    if fwd:
                        h[x] = jg[e, hx]
                    else:
                        for z in range(N):
                            if jg[e, z] == hx:
                                h[x] = z
                                break
        e0 = ring_e[t0]
        if e0 >= 0:
            for x in range(N):
                jg[e0, x] = s[x]
            ja[e0] = i
            jb[e0] = j
        for x in range(N):
            s[x] = h[x]


# -- per-level minimality test -------------------------------------------------


@njit(cache=True, nogil=True)
def _hash(x, mask):
    h = x * 0x9E3779B97F4A7C15
    h ^= h >> 29
    return h & mask


@njit(cache=True, nogil=True)
def _is_prime(x):
    if x < 2:
        return False
    f = 2
    while f * f <= x:
        if x % f == 0:
            return False
        f += 1
    return True


@njit(cache=True, nogil=True)
def _lookup(y, orb_word, hidx, hmask):
    pos = _hash(y, hmask)
    while hidx[pos] >= 0:
        if orb_word[hidx[pos]] == y:
            return hidx[pos]
        pos = (pos + 1) & hmask
    return -1


@njit(cache=True, nogil=True)
def level_test(
    word, gens, ng, order, N, n, m, base, w, want, out, out_order,
    orb_word, orb_perm, orb_inv, orb_pos, hidx,
    nets_m, nets_s, nets_n, bp, work, jtmp, stats,
):  # fmt: skip
    """Orbit-minimality of ``word`` under the group ``<gens[:ng]>`` of size ``order``.

    Returns -1 on rejection, ``ORBIT_FULL`` when scratch is too small,
    otherwise the number of stabiliser generators written to ``out``; the
    stabiliser's order goes to ``out_order[0]``.  Schreier generators are
    only formed when the stabiliser is known to be non-trivial.
    """
    stats[ST_TESTS] += 1
    out_order[0] = order
    if ng == 0:
        return 0
    W = m * w
    top = n + m - 1
    # nets_n[g]: -2 unknown, -1 acts non-trivially but not compiled yet,
    # otherwise the stage count (0 for a trivial action)
    nontriv = 0
    for g in range(ng):
        if nets_n[g] == -2:
            nets_n[g] = 0
            for i in range(n, n + m):
                if gens[g, i] != i:
                    nets_n[g] = -1
                    break
            if nets_n[g] == 0:
                for j in range(base, base + w):
                    if gens[g, j] != j:
                        nets_n[g] = -1
                        break
        if nets_n[g] != 0:
            nontriv += 1
    if nontriv == 0:
        for g in range(ng):
            for x in range(N):
                out[g, x] = gens[g, x]
        return ng

    # breadth-first orbit, aborting on a smaller image
    cap = orb_word.shape[0]
    hmask = hidx.shape[0] - 1
    count = 1
    orb_word[0] = word
    p0 = _hash(word, hmask)
    hidx[p0] = 0
    orb_pos[0] = p0
    if want:
        for x in range(N):
            orb_perm[0, x] = x
            orb_inv[0, x] = x
    result = 0
    qi = 0
    while qi < count and result == 0:
        x = orb_word[qi]
        for g in range(ng):
            if nets_n[g] == 0:
                continue
            if nets_n[g] < 0:
                for i in range(n, n + m):
                    gi = gens[g, i]
                    for j in range(base, base + w):
                        bp[(top - i) * w + (j - base)] = (top - gi) * w + (gens[g, j] - base)
                nets_n[g] = benes_compile(bp, W, nets_m[g], nets_s[g], work)
            y = benes_apply(x, nets_m[g], nets_s[g], nets_n[g])
            if y < word:
                result = -1
                break
            pos = _hash(y, hmask)
            known = False
            while hidx[pos] >= 0:
                if orb_word[hidx[pos]] == y:
                    known = True
                    break
                pos = (pos + 1) & hmask
            if not known:
                if count >= cap:
                    result = ORBIT_FULL
                    break
                orb_word[count] = y
                hidx[pos] = count
                orb_pos[count] = pos
                if want:
                    for z in range(N):
                        v = gens[g, orb_perm[qi, z]]
                        orb_perm[count, z] = v
                        orb_inv[count, v] = z
                count += 1
        qi += 1
    stats[ST_ORBIT] += count

    jcount = 0
    if result == 0 and want:
        target = order // count
        out_order[0] = target
        if count == 1:
            for g in range(ng):
                for x in range(N):
                    out[g, x] = gens[g, x]
            jcount = ng
        elif target > 1:
            # Schreier generators u_y^-1 g u_x, filtered
            one_suffices = target < (1 << 20) and _is_prime(target)
            ja = jtmp[0]
            jb = jtmp[1]
            prev = jtmp[2]
            queue = jtmp[3]
            ring = jtmp[4]
            ring_e = jtmp[5]
            h = jtmp[6]
            tmp = jtmp[7]
            s = jtmp[8]
            done = False
            for xi in range(count):
                x = orb_word[xi]
                for g in range(ng):
                    if nets_n[g] == 0:
                        y = x
                        yi = xi
                    else:
                        y = benes_apply(x, nets_m[g], nets_s[g], nets_n[g])
                        yi = _lookup(y, orb_word, hidx, hmask)
                    ident = True
                    for z in range(N):
                        v = orb_inv[yi, gens[g, orb_perm[xi, z]]]
                        s[z] = v
                        if v != z:
                            ident = False
                    if not ident:
                        stats[ST_SCHREIER] += 1
                        jcount = _jerrum_add(s, N, out, ja, jb, jcount, prev, queue, ring, ring_e, h, tmp)
                        if one_suffices:
                            done = True
                            break
                if done:
                    break
    for c in range(count):
        hidx[orb_pos[c]] = -1
    if result != 0:
        return result
    return jcount


@njit(cache=True, nogil=True)
def _sort_rows(x, m, w, rows):
    """Re-pack the ``m`` blocks of ``x`` in ascending order."""
    mask = (1 << w) - 1
    for t in range(m):
        rows[t] = (x >> ((m - 1 - t) * w)) & mask
    for t in range(1, m):
        v = rows[t]
        u = t - 1
        while u >= 0 and rows[u] > v:
            rows[u + 1] = rows[u]
            u -= 1
        rows[u + 1] = v
    y = 0
    for t in range(m):
        y = (y << w) | rows[t]
    return y


@njit(cache=True, nogil=True)
def deepest_level_test(
    word, hg, nh, horder, N, n, m, base, w, want, out, out_order,
    orb_word, orb_perm, orb_inv, orb_pos, hidx,
    nets_m, nets_s, nets_n, bp, work, jtmp, rows, stats,
):  # fmt: skip
    """Minimality of ``word`` under ``H x Sym(new atoms)`` with ``H = <hg[:nh]>``.

    The symmetric factor is quotiented out: ``word`` must list its blocks in
    ascending order, and the orbit is scanned over block multisets under
    ``H`` alone.  Stabiliser generators are lifts of the multiset
    stabiliser's Schreier generators plus swaps of equal adjacent blocks.
    Same return convention as :func:`level_test`.
    """
    stats[ST_TESTS] += 1
    mask = (1 << w) - 1
    prev_row = -1
    kern = 1
    run = 1
    for t in range(m):
        r = (word >> ((m - 1 - t) * w)) & mask
        if r < prev_row:
            return -1
        if r == prev_row:
            run += 1
            kern *= run
        else:
            run = 1
        prev_row = r
        rows[NM + t] = r  # the word's own blocks, kept for lifting
    W = m * w
    top = n + m - 1
    nontriv = 0
    for g in range(nh):
        if nets_n[g] == -2:
            nets_n[g] = 0
            for j in range(base, base + w):
                if hg[g, j] != j:
                    nets_n[g] = -1
                    break
        if nets_n[g] != 0:
            nontriv += 1

    ja = jtmp[0]
    jb = jtmp[1]
    prev = jtmp[2]
    queue = jtmp[3]
    ring = jtmp[4]
    ring_e = jtmp[5]
    h = jtmp[6]
    tmp = jtmp[7]
    s = jtmp[8]

    if nontriv == 0:
        out_order[0] = horder * kern
        if not want:
            return 0
        jcount = 0
        for g in range(nh):
            for x in range(N):
                out[jcount, x] = hg[g, x]
            jcount += 1
        for t in range(m - 1):
            if rows[NM + t] == rows[NM + t + 1]:
                for x in range(N):
                    out[jcount, x] = x
                out[jcount, n + t] = n + t + 1
                out[jcount, n + t + 1] = n + t
                jcount += 1
        return jcount

    cap = orb_word.shape[0]
    hmask = hidx.shape[0] - 1
    count = 1
    orb_word[0] = word
    p0 = _hash(word, hmask)
    hidx[p0] = 0
    orb_pos[0] = p0
    if want:
        for x in range(N):
            orb_perm[0, x] = x
            orb_inv[0, x] = x
    result = 0
    qi = 0
    while qi < count and result == 0:
        x = orb_word[qi]
        for g in range(nh):
            if nets_n[g] == 0:
                continue
            if nets_n[g] < 0:
                for i in range(n, n + m):
                    for j in range(base, base + w):
                        bp[(top - i) * w + (j - base)] = (top - i) * w + (hg[g, j] - base)
                nets_n[g] = benes_compile(bp, W, nets_m[g], nets_s[g], work)
            y = _sort_rows(benes_apply(x, nets_m[g], nets_s[g], nets_n[g]), m, w, rows)
            if y < word:
                result = -1
                break
            pos = _hash(y, hmask)
            known = False
            while hidx[pos] >= 0:
                if orb_word[hidx[pos]] == y:
                    known = True
                    break
                pos = (pos + 1) & hmask
            if not known:
                if count >= cap:
                    result = ORBIT_FULL
                    break
                orb_word[count] = y
                hidx[pos] = count
                orb_pos[count] = pos
                if want:
                    for z in range(N):
                        v = hg[g, orb_perm[qi, z]]
                        orb_perm[count, z] = v
                        orb_inv[count, v] = z
                count += 1
        qi += 1
    stats[ST_ORBIT] += count

    jcount = 0
    if result == 0:
        hstab = horder // count
        out_order[0] = hstab * kern
        if want:
            for t in range(m - 1):
                if rows[NM + t] == rows[NM + t + 1]:
                    for x in range(N):
                        s[x] = x
                    s[n + t] = n + t + 1
                    s[n + t + 1] = n + t
                    jcount = _jerrum_add(s, N, out, ja, jb, jcount, prev, queue, ring, ring_e, h, tmp)
            if hstab > 1:
                one_suffices = hstab < (1 << 20) and _is_prime(hstab)
                done = False
                for xi in range(count):
                    x = orb_word[xi]
                    for g in range(nh):
                        if nets_n[g] == 0:
                            yi = xi
                        else:
                            y = _sort_rows(benes_apply(x, nets_m[g], nets_s[g], nets_n[g]), m, w, rows)
                            yi = _lookup(y, orb_word, hidx, hmask)
                        ident = True
                        for z in range(n):
                            v = orb_inv[yi, hg[g, orb_perm[xi, z]]]
                            s[z] = v
                            if v != z:
                                ident = False
                        if ident:
                            continue
                        # match each block's image to an unused equal block of the word
                        for t in range(m):
                            rows[2 * NM + t] = 0
                        for t in range(m):
                            r = rows[NM + t]
                            img = 0
                            for j in range(base, base + w):
                                if (r >> (j - base)) & 1:
                                    img |= 1 << (s[j] - base)
                            for u in range(m):
                                if rows[2 * NM + u] == 0 and rows[NM + u] == img:
                                    rows[2 * NM + u] = 1
                                    s[n + t] = n + u
                                    break
                        stats[ST_SCHREIER] += 1
                        jcount = _jerrum_add(s, N, out, ja, jb, jcount, prev, queue, ring, ring_e, h, tmp)
                        if one_suffices:
                            done = True
                            break
                    if done:
                        break
    for c in range(count):
        hidx[orb_pos[c]] = -1
    if result != 0:
        return result
    return jcount


# -- node construction ---------------------------------------------------------


@njit(cache=True, nogil=True)
def _finish_slot(lv, sl_n, sl_up, sl_meet, sl_zm):
    n = sl_n[lv]
    for a in range(2, n):
        zm = 0
        for b in range(2, n):
            if sl_meet[lv, a, b] == 0:
                zm |= 1 << b
        sl_zm[lv, a] = zm


@njit(cache=True, nogil=True)
def load_record(rec, lv, sl_n, sl_k, sl_starts, sl_cov, sl_up, sl_meet, sl_zm, sl_ng, sl_ord, sl_gens):
    n = rec[0]
    k = rec[1]
    sl_n[lv] = n
    sl_k[lv] = k
    for d in range(k + 1):
        sl_starts[lv, d] = rec[3 + d]
    for i in range(NM):
        sl_cov[lv, i] = rec[COV0 + i] if i < n else 0
        sl_up[lv, i] = 0
    for i in range(2, n):
        acc = 0
        c = sl_cov[lv, i]
        for j in range(2, i):
            if (c >> j) & 1:
                acc |= (1 << j) | sl_up[lv, j]
        sl_up[lv, i] = acc
    # meets from down-sets
    down = np.zeros(NM, np.int64)
    for i in range(2, n):
        down[i] |= 1 << i
        for j in range(2, n):
            if (sl_up[lv, i] >> j) & 1:
                down[j] |= 1 << i
    for a in range(n):
        for b in range(n):
            sl_meet[lv, a, b] = 0
    for a in range(n):
        sl_meet[lv, a, 1] = a
        sl_meet[lv, 1, a] = a
    for a in range(2, n):
        for b in range(2, n):
            lower = down[a] & down[b]
            g = 0
            for c in range(2, n):
                if (lower >> c) & 1 and (lower & ~down[c]) == 0:
                    g = c
                    break
            sl_meet[lv, a, b] = g
    _finish_slot(lv, sl_n, sl_up, sl_meet, sl_zm)
    ng = rec[2]
    sl_ng[lv] = ng
    sl_ord[lv] = max(rec[ORD0], 1)
    for g in range(ng):
        for x in range(n):
            sl_gens[lv, g, x] = rec[GEN0 + g * NM + x]


@njit(cache=True, nogil=True)
def _child_slot(lv, m, ups, sl_n, sl_k, sl_starts, sl_cov, sl_up, sl_meet, sl_zm):
    """Slot ``lv + 1`` from slot ``lv`` plus ``m`` atoms with shades ``ups``."""
    c = lv + 1
    n = sl_n[lv]
    k = sl_k[lv]
    N = n + m
    sl_n[c] = N
    sl_k[c] = k + 1
    for d in range(k + 1):
        sl_starts[c, d] = sl_starts[lv, d]
    sl_starts[c, k + 1] = N
    for i in range(n):
        sl_cov[c, i] = sl_cov[lv, i]
        sl_up[c, i] = sl_up[lv, i]
        for j in range(n):
            sl_meet[c, i, j] = sl_meet[lv, i, j]
        for j in range(n, N):
            sl_meet[c, i, j] = 0
    for t in range(m):
        i = n + t
        U = ups[t]
        sl_up[c, i] = U
        cv = 0
        for j in range(2, n):
            if (U >> j) & 1:
                minimal = True
                for x in range(2, n):
                    if (U >> x) & 1 and (sl_up[lv, x] >> j) & 1:
                        minimal = False
                        break
                if minimal:
                    cv |= 1 << j
        sl_cov[c, i] = cv if cv != 0 else TOP
        for j in range(N):
            sl_meet[c, i, j] = 0
        sl_meet[c, i, i] = i
        sl_meet[c, i, 1] = i
        sl_meet[c, 1, i] = i
        for x in range(2, n):
            if (U >> x) & 1:
                sl_meet[c, i, x] = i
                sl_meet[c, x, i] = i
        for a in range(2, n):
            if (U >> a) & 1:
                for b in range(2, n):
                    if (U >> b) & 1 and sl_meet[c, a, b] == 0:
                        sl_meet[c, a, b] = i
    _finish_slot(c, sl_n, sl_up, sl_meet, sl_zm)


# -- child generation ---------------------------------------------------------------


@njit(cache=True, nogil=True)
def _push(sp, lv, m, U, ng, order, gsrc, st_lv, st_up, st_m, st_ng, st_ord, st_gens, N):
    if sp >= st_lv.shape[0]:
        return -1
    st_lv[sp] = lv
    st_m[sp] = m
    for t in range(m):
        st_up[sp, t] = U[t]
    st_ng[sp] = ng
    st_ord[sp] = order
    for g in range(ng):
        for x in range(N):
            st_gens[sp, g, x] = gsrc[g, x]
    return sp + 1


@njit(cache=True, nogil=True)
def gen_children(
    lv, m, vi, graded, want, early,
    sl_n, sl_k, sl_starts, sl_up, sl_meet, sl_zm, sl_ng, sl_ord, sl_gens,
    sp, st_lv, st_up, st_m, st_ng, st_ord, st_gens,
    orb_word, orb_perm, orb_inv, orb_pos, hidx,
    grp, grp_n, grp_ord, nets_m, nets_s, nets_n, bp, work, jtmp, stats,
):  # fmt: skip
    """Push every canonical child of slot ``lv`` with ``m`` new atoms.

    Returns the new stack pointer, or a negative status code.
    """
    n = sl_n[lv]
    k = sl_k[lv]
    N = n + m
    # S_k = Stab(L) x Sym(new atoms); the first ngh generators span Stab(L)
    ng = sl_ng[lv]
    ngh = ng
    for g in range(ng):
        for x in range(n):
            grp[k, g, x] = sl_gens[lv, g, x]
        for x in range(n, N):
            grp[k, g, x] = x
    for i in range(n, N - 1):
        for x in range(N):
            grp[k, ng, x] = x
        grp[k, ng, i] = i + 1
        grp[k, ng, i + 1] = i
        ng += 1
    grp_n[k] = ng
    order = sl_ord[lv]
    for i in range(2, m + 1):
        order *= i
    grp_ord[k] = order
    for g in range(ng):
        nets_n[k, g] = -2

    U = np.zeros(NM, np.int64)
    if k == 0:
        if vi and m == 1:
            return sp
        return _push(sp, lv + 1, m, U, ng, order, grp[0], st_lv, st_up, st_m, st_ng, st_ord, st_gens, N)

    interior = 0
    for i in range(2, n):
        interior |= 1 << i
    levm = np.zeros(k + 1, np.int64)
    for d in range(1, k + 1):
        for j in range(sl_starts[lv, d - 1], sl_starts[lv, d]):
            levm[d] |= 1 << j

    P = k * m
    shade = np.zeros(NM, np.int64)
    parts = np.zeros((NM, k + 1), np.int64)
    sub = np.full(P, -1, np.int64)
    freem = np.zeros(P, np.int64)
    forcedm = np.zeros(P, np.int64)
    floorv = np.zeros(P, np.int64)
    savedU = np.zeros(P, np.int64)
    savedS = np.zeros(P, np.int64)
    rows = np.zeros(3 * NM, np.int64)

    p = 0
    fresh = True
    while p >= 0:
        d = k - p // m
        t = p % m
        lev = levm[d]
        if fresh:
            fresh = False
            savedU[p] = U[t]
            savedS[p] = shade[t]
            forcedm[p] = shade[t] & lev
            freem[p] = lev & ~forcedm[p]
            sub[p] = -1
            fl = 0
            if early and t > 0:
                same = True
                for e in range(d + 1, k + 1):
                    if parts[t - 1, e] != parts[t, e]:
                        same = False
                        break
                if same:
                    fl = parts[t - 1, d]
            floorv[p] = fl
        # restore and advance the candidate at p
        U[t] = savedU[p]
        shade[t] = savedS[p]
        parts[t, d] = 0
        free = freem[p]
        forced = forcedm[p]
        found = False
        s = sub[p]
        while True:
            if s < 0:
                s = 0
            elif s == free or (graded and d < k):
                break
            else:
                s = (s - free) & free
            Pm = forced | s
            stats[ST_CANDS] += 1
            if Pm == 0 and d == k:
                continue
            if Pm < floorv[p]:
                continue
            new = U[t] | Pm
            ok = True
            for a in range(sl_starts[lv, d - 1], sl_starts[lv, d]):
                if (Pm >> a) & 1:
                    for b in range(2, n):
                        if (new >> b) & 1:
                            c = sl_meet[lv, a, b]
                            if c != 0 and ((new >> c) & 1) == 0:
                                ok = False
                                break
                    if not ok:
                        break
            if ok:
                for s2 in range(t):
                    common = U[s2] & new
                    cl = common & lev
                    if cl != 0:
                        for a in range(sl_starts[lv, d - 1], sl_starts[lv, d]):
                            if (cl >> a) & 1 and (sl_zm[lv, a] & common) != 0:
                                ok = False
                                break
                    if not ok:
                        break
            if ok:
                found = True
                break
        sub[p] = s
        if not found:
            p -= 1
            continue
        Pm = forced | s
        closure = 0
        for a in range(sl_starts[lv, d - 1], sl_starts[lv, d]):
            if (Pm >> a) & 1:
                closure |= sl_up[lv, a]
        U[t] = savedU[p] | Pm
        shade[t] = savedS[p] | closure
        parts[t, d] = Pm
        if t < m - 1:
            p += 1
            fresh = True
            continue
        # level d complete
        if graded and d == k:
            union = 0
            for s2 in range(m):
                union |= parts[s2, k]
            if union != levm[k]:
                continue
        base = sl_starts[lv, d - 1]
        w = sl_starts[lv, d] - base
        if early:
            word = 0
            for s2 in range(m):
                word = (word << w) | (parts[s2, d] >> base)
            need = want or d > 1
            if d == k:
                r = deepest_level_test(
                    word, grp[k], ngh, sl_ord[lv], N, n, m, base, w, need, grp[k - 1], grp_ord[k - 1 : k],
                    orb_word, orb_perm, orb_inv, orb_pos, hidx,
                    nets_m[k], nets_s[k], nets_n[k], bp, work, jtmp, rows, stats,
                )  # fmt: skip
            else:
                r = level_test(
                    word, grp[d], grp_n[d], grp_ord[d], N, n, m, base, w, need, grp[d - 1], grp_ord[d - 1 : d],
                    orb_word, orb_perm, orb_inv, orb_pos, hidx,
                    nets_m[d], nets_s[d], nets_n[d], bp, work, jtmp, stats,
                )  # fmt: skip
            if r == ORBIT_FULL:
                return ORBIT_FULL
            if r < 0:
                continue
            grp_n[d - 1] = r
            for g in range(r):
                nets_n[d - 1, g] = -2
        if d > 1:
            p += 1
            fresh = True
            continue
        # full configuration
        if vi and m == 1 and U[0] == interior:
            continue
        if not early:
            okc = True
            for dd in range(k, 0, -1):
                bb = sl_starts[lv, dd - 1]
                ww = sl_starts[lv, dd] - bb
                word = 0
                for s2 in range(m):
                    word = (word << ww) | (parts[s2, dd] >> bb)
                need = want or dd > 1
                if dd == k:
                    r = deepest_level_test(
                        word, grp[k], ngh, sl_ord[lv], N, n, m, bb, ww, need, grp[k - 1], grp_ord[k - 1 : k],
                        orb_word, orb_perm, orb_inv, orb_pos, hidx,
                        nets_m[k], nets_s[k], nets_n[k], bp, work, jtmp, rows, stats,
                    )  # fmt: skip
                else:
                    r = level_test(
                        word, grp[dd], grp_n[dd], grp_ord[dd], N, n, m, bb, ww, need, grp[dd - 1], grp_ord[dd - 1 : dd],
                        orb_word, orb_perm, orb_inv, orb_pos, hidx,
                        nets_m[dd], nets_s[dd], nets_n[dd], bp, work, jtmp, stats,
                    )  # fmt: skip
                if r == ORBIT_FULL:
                    return ORBIT_FULL
                if r < 0:
                    okc = False
                    break
                grp_n[dd - 1] = r
                for g in range(r):
                    nets_n[dd - 1, g] = -2
            if not okc:
                continue
        ngc = grp_n[0] if want else 0
        ordc = grp_ord[0] if want else 0
        sp = _push(sp, lv + 1, m, U, ngc, ordc, grp[0], st_lv, st_up, st_m, st_ng, st_ord, st_gens, N)
        if sp < 0:
            return STACK_FULL
    return sp


# -- driver ------------------------------------------------------------------------


@njit(cache=True, nogil=True)
def _emit(buf, ne, lv, sl_n, sl_k, sl_starts, sl_cov, sl_ng, sl_ord, sl_gens, full):
    if ne >= buf.shape[0]:
        return -1
    n = sl_n[lv]
    k = sl_k[lv]
    buf[ne, 0] = n
    buf[ne, 1] = k
    for d in range(k + 1):
        buf[ne, 3 + d] = sl_starts[lv, d]
    for i in range(n):
        buf[ne, COV0 + i] = sl_cov[lv, i]
    if full:
        ng = sl_ng[lv]
        buf[ne, 2] = ng
        buf[ne, ORD0] = sl_ord[lv]
        for g in range(ng):
            for x in range(n):
                buf[ne, GEN0 + g * NM + x] = sl_gens[lv, g, x]
    else:
        buf[ne, 2] = 0
    return ne + 1


@njit(cache=True, nogil=True)
def run_dfs(
    rec, m_lo, n_hi, vi, graded, count_root, early, emit_mode, keep_gens, counts, stats,
    orb_word, orb_perm, orb_inv, orb_pos, hidx,
    st_lv, st_up, st_m, st_ng, st_ord, st_gens, emit,
):  # fmt: skip
    """Depth-first search below the node ``rec``.

    Counts every visited node (the root only if ``count_root``) into
    ``counts[n]``.  Children of the root use ``m >= m_lo``; no node exceeds
    ``n_hi`` elements.  ``emit_mode`` 1 writes light records, 2 full records
    (with generators) to ``emit``.  ``keep_gens`` computes generators even
    for nodes of the largest size.  Returns the number of emitted records or
    a negative status code.
    """
    NL = NM + 1
    sl_n = np.zeros(NL, np.int64)
    sl_k = np.zeros(NL, np.int64)
    sl_starts = np.zeros((NL, NM + 1), np.int64)
    sl_cov = np.zeros((NL, NM), np.int64)
    sl_up = np.zeros((NL, NM), np.int64)
    sl_meet = np.zeros((NL, NM, NM), np.int64)
    sl_zm = np.zeros((NL, NM), np.int64)
    sl_ng = np.zeros(NL, np.int64)
    sl_ord = np.zeros(NL, np.int64)
    sl_gens = np.zeros((NL, MAXG, NM), np.int64)
    grp = np.zeros((NM + 1, MAXG, NM), np.int64)
    grp_n = np.zeros(NM + 1, np.int64)
    grp_ord = np.zeros(NM + 1, np.int64)
    nets_m = np.zeros((NM + 1, MAXG, MAXST), np.int64)
    nets_s = np.zeros((NM + 1, MAXG, MAXST), np.int64)
    nets_n = np.zeros((NM + 1, MAXG), np.int64)
    bp = np.zeros(64, np.int64)
    work = np.zeros((6, 64), np.int64)
    jtmp = np.zeros((10, NM + 2), np.int64)

    load_record(rec, 0, sl_n, sl_k, sl_starts, sl_cov, sl_up, sl_meet, sl_zm, sl_ng, sl_ord, sl_gens)
    ne = 0
    if count_root:
        counts[sl_n[0]] += 1
        if emit_mode > 0:
            ne = _emit(emit, ne, 0, sl_n, sl_k, sl_starts, sl_cov, sl_ng, sl_ord, sl_gens, emit_mode == 2)
            if ne < 0:
                return EMIT_FULL
    sp = 0
    # children of the root
    n0 = sl_n[0]
    for m in range(n_hi - n0, m_lo - 1, -1):
        want = keep_gens or n0 + m < n_hi
        sp = gen_children(
            0, m, vi, graded, want, early,
            sl_n, sl_k, sl_starts, sl_up, sl_meet, sl_zm, sl_ng, sl_ord, sl_gens,
            sp, st_lv, st_up, st_m, st_ng, st_ord, st_gens,
            orb_word, orb_perm, orb_inv, orb_pos, hidx,
            grp, grp_n, grp_ord, nets_m, nets_s, nets_n, bp, work, jtmp, stats,
        )  # fmt: skip
        if sp < 0:
            return sp
    while sp > 0:
        sp -= 1
        lv = st_lv[sp]
        parent = lv - 1
        m = st_m[sp]
        _child_slot(parent, m, st_up[sp], sl_n, sl_k, sl_starts, sl_cov, sl_up, sl_meet, sl_zm)
        ng = st_ng[sp]
        sl_ng[lv] = ng
        sl_ord[lv] = st_ord[sp]
        N = sl_n[lv]
        for g in range(ng):
            for x in range(N):
                sl_gens[lv, g, x] = st_gens[sp, g, x]
        counts[N] += 1
        if emit_mode > 0:
            ne = _emit(emit, ne, lv, sl_n, sl_k, sl_starts, sl_cov, sl_ng, sl_ord, sl_gens, emit_mode == 2)
            if ne < 0:
                return EMIT_FULL
        for m2 in range(n_hi - N, 0, -1):
            want = keep_gens or N + m2 < n_hi
            sp = gen_children(
                lv, m2, vi, graded, want, early,
                sl_n, sl_k, sl_starts, sl_up, sl_meet, sl_zm, sl_ng, sl_ord, sl_gens,
                sp, st_lv, st_up, st_m, st_ng, st_ord, st_gens,
                orb_word, orb_perm, orb_inv, orb_pos, hidx,
                grp, grp_n, grp_ord, nets_m, nets_s, nets_n, bp, work, jtmp, stats,
            )  # fmt: skip
            if sp < 0:
                return sp
    return ne
