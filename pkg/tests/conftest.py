import pytest

from mdskit.dbg_core import GraphParams, encode
from mdskit.mds_space import enumerate_all_mds_bruteforce, group_components


@pytest.fixture(scope="session")
def p3():
    return GraphParams(2, 3)


@pytest.fixture(scope="session")
def p4():
    return GraphParams(2, 4)


@pytest.fixture(scope="session")
def all_mds_k4(p4):
    return enumerate_all_mds_bruteforce(p4)


@pytest.fixture(scope="session")
def components_k4(all_mds_k4):
    return group_components(all_mds_k4)


@pytest.fixture(scope="session")
def all_mds_k6():
    return enumerate_all_mds_bruteforce(GraphParams(2, 6))


def codes(words, params):
    return [encode(w, params) for w in words]


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(line)
