from fractions import Fraction

import numpy as np
import pytest

from centrosym.matrix_core import as_matrix


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def Q(data):
    """Exact rational matrix."""
    return as_matrix(data, exact=True)


def F(p, q=1):
    return Fraction(p, q)


_CRITERIA = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance line; call with (number, passed, detail)."""

    def record(number, passed, detail):
        line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
        _CRITERIA[number] = line
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        terminalreporter.write_line(_CRITERIA[number])
