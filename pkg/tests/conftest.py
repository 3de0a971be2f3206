import sys

import numpy as np
import pytest
from hypothesis import settings, strategies as st

from bjpreserve.core import AlgebraElement, as_shape

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

SHAPES = [(1,), (2,), (3,), (4,), (1, 1), (1, 2), (2, 2), (2, 3), (1, 1, 1)]

shapes = st.sampled_from(SHAPES)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def elements(draw, shape):
    """Elements with small complex Gaussian-like entries drawn by hypothesis."""
    shape = as_shape(shape)
    vals = st.floats(min_value=-3, max_value=3, allow_nan=False, allow_infinity=False)
    blocks = []
    for n in shape.dims:
        re = np.array(draw(st.lists(vals, min_size=n * n, max_size=n * n))).reshape(n, n)
        im = np.array(draw(st.lists(vals, min_size=n * n, max_size=n * n))).reshape(n, n)
        blocks.append(re + 1j * im)
    return AlgebraElement(shape, blocks)


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for line in mod.LINES:
            terminalreporter.write_line(line)
