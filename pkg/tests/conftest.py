from fractions import Fraction

import pytest
from hypothesis import strategies as st

from schmidtgame.arenas import PointSet


def fractions_in(lo=0, hi=1, grain=64):
    return st.integers(lo * grain, hi * grain).map(lambda k: Fraction(k, grain))


def point_sets(dim=1, max_size=8, grain=64):
    point = st.tuples(*[fractions_in(grain=grain)] * dim)
    return st.lists(point, min_size=1, max_size=max_size).map(PointSet)


@pytest.fixture
def F():
    return Fraction


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
