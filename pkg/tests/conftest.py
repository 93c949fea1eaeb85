from __future__ import annotations

import pytest

from invshapiro.groups import Subgroup, left_transversal, named_group

# filled by test_acceptance.py, printed at the end of the run
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def s3():
    return named_group("s3")


@pytest.fixture(scope="session")
def a4():
    return named_group("a4")


@pytest.fixture(scope="session")
def a5():
    return named_group("a5")


def subgroup_setup(G, y0_mode: str = "identity-first"):
    h = int(G.involutions[0])
    H = Subgroup.generated(G, [h])
    T = left_transversal(G, H, y0=h if y0_mode == "nontrivial-y0" else None)
    return h, H, T


@pytest.fixture(scope="session")
def s3_setup(s3):
    return (s3,) + subgroup_setup(s3)


@pytest.fixture(scope="session")
def s3_setup_y0(s3):
    return (s3,) + subgroup_setup(s3, "nontrivial-y0")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
