import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sqgperiodic.dyadic import build_decomposition
from sqgperiodic.grid import Grid

# Pass/fail lines gathered by the acceptance module; re-emitted after the run
# so they are visible regardless of capture settings.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def grid32():
    return Grid(32)


@pytest.fixture(scope="session")
def grid64():
    return Grid(64)


@pytest.fixture(scope="session")
def dec32(grid32):
    return build_decomposition(grid32)


@pytest.fixture(scope="session")
def dec64(grid64):
    return build_decomposition(grid64)


@pytest.fixture()
def rng():
    return np.random.default_rng(20260809)
