import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from dcnot.linalg import expi

settings.register_profile(
    "dcnot",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("dcnot")

_coord = st.floats(-1.0, 1.0, allow_nan=False, allow_infinity=False)


@st.composite
def unit_vectors(draw):
    v = np.array([draw(_coord), draw(_coord), draw(_coord)])
    n = np.linalg.norm(v)
    if n < 1e-3:
        v, n = np.array([0.0, 0.0, 1.0]), 1.0
    return v / n


angles = st.floats(-np.pi, np.pi, allow_nan=False, allow_infinity=False)


@st.composite
def su2s(draw):
    return expi(draw(unit_vectors()), draw(angles))


@st.composite
def vec_pairs(draw, r):
    return [(draw(unit_vectors()), draw(unit_vectors())) for _ in range(r)]


def perp_to(u, v):
    """Unit vector perpendicular to u built from a seed v."""
    w = np.cross(u, v)
    if np.linalg.norm(w) < 1e-6:
        w = np.cross(u, [0.3, -0.5, 0.8])
    return w / np.linalg.norm(w)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
