from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from colorminer.core import ColoredString, from_strings
from colorminer import suffix_tree

DATA = Path(__file__).parent / "data"

# numba dispatch makes the first call per signature slow
settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def running():
    return from_strings("acacacbacab", "xyxzxyzyxxz")


@pytest.fixture(scope="session")
def running_tree(running):
    return suffix_tree.build(running)


@pytest.fixture(scope="session")
def y(running):
    return running.color_id("y")


@st.composite
def colored_strings(draw, max_n=24, max_sigma=3, max_gamma=3):
    n = draw(st.integers(1, max_n))
    sigma = draw(st.integers(1, max_sigma))
    gamma = draw(st.integers(1, max_gamma))
    text = draw(st.lists(st.integers(0, sigma - 1), min_size=n, max_size=n))
    colors = draw(st.lists(st.integers(0, gamma - 1), min_size=n, max_size=n))
    return ColoredString(text=np.array(text), colors=np.array(colors), sigma=sigma, gamma=gamma)


def pattern_strings(cs, pairs, d=None):
    return {cs.format_pattern(p) for p, e in pairs if d is None or e == d}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
