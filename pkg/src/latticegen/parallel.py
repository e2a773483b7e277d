"""Seed-and-split runner for the compiled engine.

The tree is first expanded up to ``seed_size`` elements in one run, keeping
every node together with its automorphism generators.  Each frontier node
then becomes an independent task that counts the part of its subtree lying
above ``seed_size``.  Tasks run on a thread pool (the kernel releases the
GIL) and their counts are summed, so the totals do not depend on the number
of threads or on scheduling.
"""

from __future__ import annotations

import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernel as K
from .core import LevelledLattice, bits
from .enumeration import CountTable, EnumConfig

logger = logging.getLogger(__name__)

__all__ = ["KERNEL_MAX", "default_seed_size", "RunStats", "run", "root_record", "record_to_lattice"]

KERNEL_MAX = K.NM


def default_seed_size(n_max: int) -> int:
    return max(2, min(n_max, n_max - 4, 12))


def root_record() -> np.ndarray:
    rec = np.zeros(K.REC_FULL, np.int64)
    rec[0] = 2
    rec[3] = 2
    rec[K.ORD0] = 1
    return rec


def record_to_lattice(row: np.ndarray) -> LevelledLattice:
    n, k = int(row[0]), int(row[1])
    starts = [int(x) for x in row[3 : 3 + k + 1]]
    covers = [bits(int(row[K.COV0 + i])) for i in range(2, n)]
    return LevelledLattice.from_covers(n, covers, starts)


def record_text(row: np.ndarray) -> str:
    """Text record straight from a kernel row, without building a lattice."""
    n, k = int(row[0]), int(row[1])
    starts = [int(x) for x in row[3 : 3 + k + 1]]
    widths = ",".join(str(b - a) for a, b in zip(starts, starts[1:]))
    covs = ":".join(",".join(map(str, bits(int(row[K.COV0 + i])))) for i in range(2, n))
    return f"{n}|{widths}|{covs}"


@dataclass
class RunStats:
    tests: int = 0
    orbit_points: int = 0
    candidates: int = 0
    tasks: int = 0
    retries: int = 0
    seconds: float = 0.0
    cpu_seconds: float = 0.0
    lattices: int = 0
    per_task: list[float] = field(default_factory=list)

    def cycles_per_lattice(self, hz: float | None = None) -> float | None:
        """CPU time per generated lattice, in clock cycles at ``hz`` (default: detected clock)."""
        hz = hz or cpu_hz()
        if not hz or not self.lattices:
            return None
        return self.cpu_seconds * hz / self.lattices


def cpu_hz() -> float | None:
    """Nominal clock rate of the first listed core, or None when unknown."""
    try:
        with open("/proc/cpuinfo") as fh:
            for line in fh:
                if line.startswith("cpu MHz"):
                    return float(line.split(":")[1]) * 1e6
    except (OSError, ValueError):
        pass
    return None


def _run_task(rec, m_lo, n_hi, vi, graded, count_root, emit_mode, scratch: K.Scratch, early=True, keep_gens=False):
    """Run one subtree, growing scratch buffers until they suffice."""
    retries = 0
    while True:
        counts = np.zeros(K.NM + 1, np.int64)
        stats = np.zeros(4, np.int64)
        r = K.run_dfs(rec, m_lo, n_hi, vi, graded, count_root, early, emit_mode, keep_gens, counts, stats, *scratch.arrays())
        if r >= 0:
            return counts, stats, r, retries
        retries += 1
        if r == K.ORBIT_FULL:
            scratch.orbit_cap *= 2
        elif r == K.STACK_FULL:
            scratch.stack_cap *= 2
        elif r == K.EMIT_FULL:
            scratch.emit_cap = max(2 * scratch.emit_cap, 1024)
        else:  # pragma: no cover
            raise RuntimeError(f"kernel returned status {r}")
        scratch.alloc()


def run(config: EnumConfig, stats: RunStats | None = None, *, early_abort: bool = True) -> CountTable:
    """Count with the compiled engine; ``config.sink`` receives text records."""
    n_max = config.n_max
    if n_max > KERNEL_MAX:
        raise ValueError(f"compiled engine handles n <= {KERNEL_MAX}")
    vi = config.mode in ("vi", "vi-graded")
    graded = config.mode in ("graded", "vi-graded")
    seed = config.seed_size if config.seed_size is not None else default_seed_size(n_max)
    stats = stats if stats is not None else RunStats()
    sink = config.sink
    t0 = time.perf_counter()
    c0 = time.process_time()

    seed_scratch = K.Scratch(emit_cap=1024, rec_width=K.REC_FULL)
    counts, st, ne, retries = _run_task(
        root_record(), 1, seed, vi, graded, True, 2, seed_scratch, early_abort, keep_gens=seed < n_max
    )
    frontier = seed_scratch.emit[:ne].copy()
    total = counts.astype(object)
    stats.tests += int(st[K.ST_TESTS])
    stats.orbit_points += int(st[K.ST_ORBIT])
    stats.candidates += int(st[K.ST_CANDS])
    stats.retries += retries
    if sink is not None:
        for row in frontier:
            sink(record_text(row))
    logger.info("seed phase: %d nodes up to n=%d", ne, seed)

    if seed < n_max:
        emit_mode = 1 if sink is not None else 0
        tasks = list(frontier)
        stats.tasks = len(tasks)

        local = threading.local()

        def work(row: np.ndarray):
            # one scratch per thread, kept across tasks so buffers grow once
            scratch = getattr(local, "scratch", None)
            if scratch is None:
                scratch = local.scratch = K.Scratch(emit_cap=4096 if emit_mode else 0)
            t = time.perf_counter()
            m_lo = seed - int(row[0]) + 1
            c, s, e, r = _run_task(row, m_lo, n_max, vi, graded, False, emit_mode, scratch, early_abort)
            rows = scratch.emit[:e].copy() if emit_mode else None
            return c, s, rows, r, time.perf_counter() - t

        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            for c, s, rows, r, dt in pool.map(work, tasks):
                total += c.astype(object)
                stats.tests += int(s[K.ST_TESTS])
                stats.orbit_points += int(s[K.ST_ORBIT])
                stats.candidates += int(s[K.ST_CANDS])
                stats.retries += r
                stats.per_task.append(dt)
                if rows is not None:
                    for row in rows:
                        sink(record_text(row))

    stats.seconds = time.perf_counter() - t0
    stats.cpu_seconds = time.process_time() - c0
    table = CountTable(config.mode, n_max, {n: int(total[n]) for n in range(2, n_max + 1)})
    stats.lattices = table.total
    cycles = stats.cycles_per_lattice()
    logger.info(
        "compiled run: n_max=%d mode=%s %.2fs, %s cycles per lattice",
        n_max, config.mode, stats.seconds, "unknown" if cycles is None else f"{cycles:.0f}",
    )  # fmt: skip
    return table
