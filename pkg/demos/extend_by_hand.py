"""Grow lattices one level at a time and watch which extensions are legal.

Run with ``python3 demos/extend_by_hand.py``.
"""

from __future__ import annotations

from latticegen import IllegalExtension, LevelledLattice, check_extension, extend, serialize
from latticegen.core import mask_of

# The four-element diamond: top 1, two atoms 2 and 3, bottom 0.
diamond = LevelledLattice.from_covers(4, [[1], [1]])
print("start:", serialize(diamond))

# Each new atom is described by the up-closed set of interior elements above it.
legal = {
    "one atom under 2 (the pentagon)": [mask_of([2])],
    "one atom under 2 and 3": [mask_of([2, 3])],
    "one atom under each of 2 and 3": [mask_of([2]), mask_of([3])],
}
for label, upsets in legal.items():
    print(f"  legal    {label:34s} -> {serialize(extend(diamond, upsets))}")

illegal = {
    "an atom above nothing": [0],
    "two atoms both under 2 and 3": [mask_of([2, 3]), mask_of([2, 3])],
}
for label, upsets in illegal.items():
    try:
        check_extension(diamond, upsets)
    except IllegalExtension as err:
        print(f"  illegal  {label:34s} -> {err}")
