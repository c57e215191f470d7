import math

import numpy as np
import pytest

from ctcfuse import Alphabet


@pytest.fixture
def blank_a():
    """Two-token alphabet {blank, a} without a word delimiter."""
    return Alphabet(("-", "a"), blank_index=0, delimiter_index=None)


@pytest.fixture
def abc_alphabet():
    return Alphabet(("<b>", " ", "a", "b", "c"), blank_index=0, delimiter_index=1)


@pytest.fixture
def two_frame_emissions():
    return np.log(np.array([[0.6, 0.4], [0.6, 0.4]]))


def random_log_probs(rng, T, V, alpha=1.0):
    return np.log(rng.dirichlet(np.full(V, alpha), size=T))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


NO_PRUNE = -math.inf


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
