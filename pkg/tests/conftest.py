import numpy as np
import pytest

from coalblotto.model import GameInstance


@pytest.fixture
def fig3_game():
    return GameInstance(1.2, 1.0, 1.5, 2.0)


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    if not test_acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in test_acceptance.verdict_lines():
        terminalreporter.write_line(line)
