"""Generate the canonical children of a lattice and compare them.

Only one child per isomorphism class survives the level-by-level
minimality test; the survivors carry their automorphism generators.

Run with ``python3 demos/canonical_children.py``.
"""

from __future__ import annotations

from collections import defaultdict

from latticegen import children, compare_lattices, serialize
from latticegen.enumeration import ROOT

N_MAX = 6
by_size = defaultdict(list)
stack = [ROOT]
while stack:
    node = stack.pop()
    by_size[node.n].append(node)
    for m in range(1, N_MAX - node.n + 1):
        stack.extend(children(node, m))

for size in sorted(by_size):
    print(f"n={size}: {len(by_size[size])} canonical lattices")

print(f"\n{N_MAX}-element lattices with their automorphism generators:")
for node in by_size[N_MAX]:
    print(f"  {serialize(node.lattice):24s} gens={[list(g) for g in node.stab_gens]}")

# Lattices with the same level profile are totally ordered; the smaller one
# is the one whose deepest new atoms have the lighter covering sets.
groups = defaultdict(list)
for node in by_size[N_MAX]:
    groups[node.lattice.level_starts].append(node.lattice)
for same in groups.values():
    if len(same) >= 2:
        a, b = same[:2]
        print(f"\ncompare {serialize(a)} with {serialize(b)}: {compare_lattices(a, b)}")
        break
