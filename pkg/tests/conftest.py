import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile("repo", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


@st.composite
def unit_vectors(draw):
    v = np.array(draw(st.lists(st.floats(-1, 1, allow_nan=False), min_size=3, max_size=3)))
    n = np.linalg.norm(v)
    if n < 1e-3:
        v, n = np.array([0.0, 0.0, 1.0]), 1.0
    return v / n


@st.composite
def rotations(draw):
    from spiderweb.sphere_core import rotation_about
    axis = draw(unit_vectors())
    angle = draw(st.floats(0, 2 * np.pi, allow_nan=False))
    return rotation_about(axis, angle)


@pytest.fixture(scope="session")
def cube_realization():
    from spiderweb.fixtures import get_fixture
    return get_fixture("cube").realization
