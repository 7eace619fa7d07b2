from fractions import Fraction

import pytest

from superpowers.sequence import SuperpowerSum

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def rows_sum(*rows, ell=None):
    return SuperpowerSum.from_rows([tuple(Fraction(x) for x in r) for r in rows], ell)


@pytest.fixture
def two_three():
    """2^n + 3^n"""
    return rows_sum((1, 2), (1, 3))
