from fractions import Fraction

import numpy as np
import pytest
from hypothesis import settings

from lowerspec.cf import make_pair

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

# the worked forge example: lambda=1, alpha~-0.12, theta~1.0, eps=0.05, K=2, 3 steps
MAIN_TARGET = dict(lam=1, alpha_target=-0.12, theta_target="1.0", K=Fraction(2), eps=0.05, steps=3)


@pytest.fixture(scope="session")
def main_cert():
    return make_pair(**MAIN_TARGET)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# one pass/fail line per acceptance criterion, collected by test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
