import random

import pytest

from bbgkz.lattice import PointConfiguration

GAUSS = PointConfiguration.from_points([[1, 0], [1, 1], [1, 2]])
A23 = PointConfiguration.from_points([[2], [3]])
LOCAL_P2 = PointConfiguration.from_points([[1, 0, 1], [0, 1, 1], [-1, -1, 1], [0, 0, 1]])
TWISTED_CUBIC = PointConfiguration.from_points([[1, 0], [1, 1], [1, 2], [1, 3]])


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
