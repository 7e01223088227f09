import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from entrocount.entropy import JointTable

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE:
        terminalreporter.write_line(line)


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE


def direct_thc(p, alpha):
    """Defining power-sum formula, independent of the library's expm1 path."""
    p = [x for x in p if x > 0]
    if alpha == 1:
        return -sum(x * np.log(x) for x in p)
    return (sum(x ** alpha for x in p) - 1) / (1 - alpha)


@st.composite
def joint_tables(draw, min_coords=2, max_coords=3, max_alphabet=4, sparse=True):
    ndim = draw(st.integers(min_coords, max_coords))
    shape = tuple(draw(st.lists(st.integers(1, max_alphabet), min_size=ndim, max_size=ndim)))
    elements = st.one_of(st.just(0.0), st.floats(0.01, 1.0)) if sparse else st.floats(0.01, 1.0)
    w = draw(arrays(float, shape, elements=elements))
    if w.sum() <= 0:
        w.flat[0] = 1.0
    return JointTable.from_array(w / w.sum())


alphas = st.sampled_from([0.3, 0.5, 0.9, 1.0, 1.1, 1.5, 2.0, 3.0])
alphas_ge1 = st.sampled_from([1.0, 1.1, 1.5, 2.0, 3.0, 5.0])
