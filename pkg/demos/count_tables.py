"""Count lattices with the compiled engine and rebuild the full table from
the vertically indecomposable counts.

Run with ``python3 demos/count_tables.py [max_n]`` (default 11).
"""

from __future__ import annotations

import sys
import time

from latticegen import EnumConfig, compose_counts, enumerate_lattices
from latticegen.parallel import RunStats, run

n_max = int(sys.argv[1]) if len(sys.argv) > 1 else 11

t0 = time.perf_counter()
vi = enumerate_lattices(EnumConfig(n_max, "vi"))
stats = RunStats()
all_ = run(EnumConfig(n_max, "all"), stats)
print(f"enumerated both tables in {time.perf_counter() - t0:.2f}s")

rebuilt = compose_counts([vi[n] for n in range(1, n_max + 1)])
print(f"{'n':>3} {'indecomposable':>15} {'all':>12} {'rebuilt':>12}")
for n in range(1, n_max + 1):
    print(f"{n:>3} {vi[n]:>15} {all_[n]:>12} {rebuilt[n - 1]:>12}")

cycles = stats.cycles_per_lattice()
if cycles is not None:
    print(f"about {cycles:.0f} clock cycles per lattice for the 'all' run")
