import numpy as np
import pytest

from thermogeom import GibbsFamily, independent_bond_chain, two_level

from modelgen import ACCEPTANCE_RESULTS

LN3 = float(np.log(3.0))


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def two_lvl():
    return two_level()


@pytest.fixture
def three_lvl():
    return GibbsFamily([0.0, 1.0, 2.0])


@pytest.fixture
def bonds4():
    return independent_bond_chain(4, 1.0)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(line)
