from pathlib import Path

import pytest
from hypothesis import strategies as st

from pickseq.core import Allocation, Instance

DATA = Path(__file__).parent / "data"


def alloc(*shares):
    """Allocation from 1-based shares."""
    return Allocation.from_one_based(shares)


@pytest.fixture
def ex1():
    return Instance(((8, 2, 1), (5, 1, 5)))


@pytest.fixture
def ex2():
    return Instance(((2, 1, 1), (1, 2, 2)))


@pytest.fixture
def ex3():
    return Instance(((9, 8, 2, 1), (2, 5, 1, 4)))


@pytest.fixture
def ex5():
    return Instance(((5, 4, 2), (8, 2, 1)))


@pytest.fixture
def ex6():
    return Instance(((2, 12, 7, 15, 11), (12, 15, 11, 7, 2), (15, 20, 9, 2, 1)))


@pytest.fixture
def ceei_ex():
    return Instance(((2, 3, 3, 2), (2, 3, 4, 1), (0, 4, 2, 4)))


@st.composite
def instances(draw, max_agents=3, max_objects=5, max_weight=5):
    """Small instances with small integer weights, so ties are common."""
    n = draw(st.integers(1, max_agents))
    m = draw(st.integers(1, max_objects))
    rows = draw(
        st.lists(
            st.lists(st.integers(0, max_weight), min_size=m, max_size=m),
            min_size=n,
            max_size=n,
        )
    )
    return Instance(tuple(tuple(r) for r in rows))


@st.composite
def instance_and_allocation(draw, **kwargs):
    inst = draw(instances(**kwargs))
    owners = draw(st.lists(st.integers(0, inst.num_agents - 1), min_size=inst.num_objects, max_size=inst.num_objects))
    return inst, Allocation.from_owners(owners, inst.num_agents)


# one PASS/FAIL line per acceptance criterion in the terminal summary
_acceptance: dict[str, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    label = marker.args[0]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        outcome_text = "PASS" if report.outcome == "passed" else "FAIL"
        if _acceptance.get(label) != "FAIL":
            _acceptance[label] = outcome_text


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_acceptance, key=lambda s: int(s.split(".")[0])):
        terminalreporter.write_line(f"{_acceptance[label]:<6} {label}")
