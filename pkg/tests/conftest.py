import numpy as np
import pytest
from hypothesis import settings, strategies as st

from enmorse.gf2 import BitMatrix, BitVector

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def bit_matrices(draw, max_rows=7, max_cols=7, min_rows=0, min_cols=0):
    rows = draw(st.integers(min_rows, max_rows))
    cols = draw(st.integers(min_cols, max_cols))
    bits = draw(st.lists(st.integers(0, 1), min_size=rows * cols, max_size=rows * cols))
    return BitMatrix.from_dense(np.array(bits, dtype=np.uint8).reshape(rows, cols))


@st.composite
def bit_vectors(draw, length):
    bits = draw(st.lists(st.integers(0, 1), min_size=length, max_size=length))
    return BitVector.from_dense(np.array(bits, dtype=np.uint8))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:  # pragma: no cover
        return
    if not test_acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(test_acceptance.RESULTS):
        terminalreporter.write_line(test_acceptance.line(k))
