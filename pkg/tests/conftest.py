import numpy as np
import pytest
from hypothesis import strategies as st

from dirichlet_wco.series import Series


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def rand_series(rng, degree, scale=1.0):
    return Series(scale * (rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)))


finite = st.floats(-2.0, 2.0, allow_nan=False, allow_infinity=False)
complexes = st.builds(complex, finite, finite)


def series_strategy(max_degree=12):
    return st.lists(complexes, min_size=1, max_size=max_degree + 1).map(Series)


def disc_points(radius=0.95):
    return st.builds(
        lambda r, t: r * np.exp(1j * t),
        st.floats(0.0, radius),
        st.floats(0.0, 2 * np.pi),
    )
