"""Isomorph-free generation of finite unlabelled lattices."""

from __future__ import annotations

from .canonical import compare_lattices, level_min_test
from .core import InvalidLattice, LevelledLattice, deserialize, serialize, validate
from .enumeration import MODES, CountTable, EnumConfig, children, compose_counts, enumerate_lattices
from .extension import IllegalExtension, check_extension, extend
from .permgroup import benes_apply, benes_compile, jerrum_reduce, orbit_scan

__all__ = [
    "MODES",
    "CountTable",
    "EnumConfig",
    "IllegalExtension",
    "InvalidLattice",
    "LevelledLattice",
    "benes_apply",
    "benes_compile",
    "check_extension",
    "children",
    "compare_lattices",
    "compose_counts",
    "deserialize",
    "enumerate_lattices",
    "extend",
    "jerrum_reduce",
    "level_min_test",
    "orbit_scan",
    "serialize",
    "validate",
]
