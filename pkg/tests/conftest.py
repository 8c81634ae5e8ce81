import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("qdlie", deadline=None, max_examples=40, derandomize=True)
settings.load_profile("qdlie")

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(1234))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
