from __future__ import annotations

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from sobtrace.grid import make_nodes
from sobtrace.norms import TraceData

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def traces(draw, min_nodes=3, max_nodes=12, max_step=2.0):
    n = draw(st.integers(min_nodes, max_nodes))
    gaps = draw(st.lists(st.floats(0.1, max_step), min_size=n - 1, max_size=n - 1))
    start = draw(st.floats(-5.0, 5.0))
    values = draw(st.lists(st.floats(-10.0, 10.0), min_size=n, max_size=n))
    x = start + np.concatenate([[0.0], np.cumsum(gaps)])
    return TraceData(make_nodes(x), np.array(values))


exponents = st.sampled_from([1.0, 1.5, 2.0, 3.0, 4.0])


def random_trace(rng: np.random.Generator, n: int, lo: float = 0.25, hi: float = 2.0):
    x = np.concatenate([[0.0], np.cumsum(rng.uniform(lo, hi, n - 1))])
    return TraceData(make_nodes(x), rng.uniform(-1.0, 1.0, n))


@pytest.fixture
def worked():
    return TraceData(make_nodes([0.0, 1.0, 2.0]), np.array([0.0, 1.0, 0.0]))


# acceptance verdicts, printed once per criterion at the end of the run
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
