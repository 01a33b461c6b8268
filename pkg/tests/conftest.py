import re

import pytest

from sheafwalls.chern import ChernData
from sheafwalls.lattice import SurfaceLattice
from sheafwalls.walls import AmpleCone

_ACCEPTANCE: dict[int, tuple[str, str]] = {}


@pytest.fixture
def quadric():
    return SurfaceLattice([[0, 1], [1, 0]], [-2, -2], 1, name="P1xP1")


@pytest.fixture
def product_fibres():
    """E x E in the basis of the two fibres and the diagonal."""
    return SurfaceLattice([[0, 1, 1], [1, 0, 1], [1, 1, 0]], [0, 0, 0], 0, name="ExE")


@pytest.fixture
def running():
    return ChernData(2, [1, 1], 2), AmpleCone([[1, 2], [2, 1]])


def pytest_runtest_logreport(report):
    match = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not match:
        return
    number, name = int(match.group(1)), match.group(2)
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = "PASS" if report.outcome == "passed" else "FAIL"
        _ACCEPTANCE[number] = (name.replace("_", " "), status)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        name, status = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {name}")
