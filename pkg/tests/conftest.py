"""Shared fixtures plus the acceptance-summary hook.

test_acceptance.py appends one line per criterion to ACCEPTANCE_LINES;
they are replayed after the run so the pass/fail record shows up even
with output capture on.
"""

import numpy as np
import pytest

from redundarith.codes import MultiRowCode

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20260814)


def random_code(rng, rows, width, radix=2, lsb_exp=0):
    digits = rng.integers(0, radix, size=(rows, width), dtype=np.int64)
    return MultiRowCode(rows, width, radix, lsb_exp, digits)
