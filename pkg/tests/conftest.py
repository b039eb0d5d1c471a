import numpy as np
import pytest
from hypothesis import strategies as st

from teich.hyp2 import HPoint, MoebiusMap

finite = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False, allow_infinity=False)


@st.composite
def sl2(draw):
    """Random SL2(R) matrix with entries of moderate size."""
    a = draw(finite.filter(lambda v: abs(v) > 0.1))
    b, c = draw(finite), draw(finite)
    return MoebiusMap(a, b, c, (1.0 + b * c) / a)


@st.composite
def points(draw):
    x = draw(st.floats(min_value=-3.0, max_value=3.0))
    y = draw(st.floats(min_value=0.05, max_value=5.0))
    return HPoint(x, y)


letters = st.sampled_from([1, -1, 2, -2])
words = st.lists(letters, min_size=0, max_size=10).map(tuple)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


hyperbolic_sl2 = sl2().filter(lambda m: abs(m.trace) > 2.05)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
