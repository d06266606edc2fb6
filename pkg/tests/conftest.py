import numpy as np
import pytest

from torus_harmonics.character_table import build_character_table


@pytest.fixture(scope="session")
def t3():
    return build_character_table(3)


@pytest.fixture(scope="session")
def t5():
    return build_character_table(5)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# criterion number -> one-line verdict, filled by test_acceptance.py
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
