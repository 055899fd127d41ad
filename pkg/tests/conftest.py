import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dwrosn.orbital import ConstellationSpec
from dwrosn.topology import NodeSet, build_potential_matrix

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def ref_spec():
    return ConstellationSpec.reference()


@pytest.fixture(scope="session")
def ref_nodes(ref_spec):
    return NodeSet.for_constellation(ref_spec, 5, 6)


@pytest.fixture(scope="session")
def slot0_potential(ref_spec):
    return build_potential_matrix(ref_spec, None, 0.0, 2000.0, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
