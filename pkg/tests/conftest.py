from __future__ import annotations

import pytest

from dualarc.arcs import dualize
from dualarc.gf import field_of_order
from dualarc.veronese import VeroneseContext, build_dual_arc


@pytest.fixture(scope="session")
def ex1():
    return build_dual_arc(VeroneseContext.of(3, 2, 1))


@pytest.fixture(scope="session")
def ex2():
    return build_dual_arc(VeroneseContext.of(2, 2, 2))


@pytest.fixture(scope="session")
def ex2_arc(ex2):
    return dualize(ex2)


@pytest.fixture(scope="session")
def q9_family():
    return build_dual_arc(VeroneseContext.of(9, 2, 1))


@pytest.fixture(scope="session")
def gf9():
    return field_of_order(9)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
