from __future__ import annotations

import pytest

from latticegen.core import LevelledLattice


def lattice(n, covers, starts=None) -> LevelledLattice:
    return LevelledLattice.from_covers(n, covers, starts)


@pytest.fixture(scope="session")
def fx():
    """Small named lattices used across the suite."""
    return {
        "L2": lattice(2, []),
        "C4": lattice(4, [[1], [2]]),
        "D4": lattice(4, [[1], [1]]),
        "N5": lattice(5, [[1], [1], [2]]),
        "M3": lattice(5, [[1], [1], [1]]),
        "H6": lattice(6, [[1], [1], [2], [3]]),
        "D4b": lattice(5, [[1], [1], [2, 3]]),
    }


FIXTURE_NAMES = ["L2", "C4", "D4", "N5", "M3", "H6", "D4b"]


_CRITERIA: dict[int, str] = {}


def record_criterion(number: int, line: str) -> None:
    _CRITERIA[number] = line


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        terminalreporter.write_line(_CRITERIA[number])
