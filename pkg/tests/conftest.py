from fractions import Fraction
from pathlib import Path

import pytest

from reflexmod.lattice import OrderHom, SubspaceLattice, lattice_closure
from reflexmod.linalg import span, unit

ROOT = Path(__file__).resolve().parent.parent
WORKSPACES = ROOT / "workspaces"


def line(*coords):
    return span([tuple(Fraction(c) for c in coords)], len(coords))


def sub(*vectors):
    return span([tuple(Fraction(c) for c in v) for v in vectors], len(vectors[0]))


@pytest.fixture
def l2():
    return SubspaceLattice([line(1, 0)], 2)


@pytest.fixture
def m3():
    return lattice_closure([line(1, 0), line(0, 1), line(1, 1)], 2)


@pytest.fixture
def n3():
    return SubspaceLattice([line(1, 0, 0), sub((1, 0, 0), (0, 1, 0))], 3)


@pytest.fixture
def b2():
    return SubspaceLattice([line(1, 0), line(0, 1)], 2)


@pytest.fixture
def trivial():
    return SubspaceLattice([], 2)


def hom(lattice, *values):
    """OrderHom from values listed in carrier order."""
    return OrderHom(lattice, dict(zip(lattice.elements, values)))


def e(n, i):
    return unit(n, i)


ACCEPTANCE_LINES: list[str] = []


def record_acceptance(number: int, name: str, ok: bool, detail: str) -> None:
    line_ = f"criterion {number} [{name}]: {'PASS' if ok else 'FAIL'} ({detail})"
    ACCEPTANCE_LINES.append(line_)
    print(line_)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for text in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(text)
