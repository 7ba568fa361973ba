import numpy as np
import pytest

from skwave import waves as wv


@pytest.fixture(scope="session")
def dn_profile():
    params = wv.solve_periodic_r1(0.5)
    return wv.sample_profile(params, wv.default_grid(params))


@pytest.fixture(scope="session")
def dnq_profile():
    params = wv.solve_periodic_r2(0.5)
    return wv.sample_profile(params, wv.default_grid(params))


@pytest.fixture(scope="session")
def solitary_r1_profile():
    params = wv.solve_solitary(1, 1.0)
    return wv.sample_profile(params, wv.default_grid(params))


@pytest.fixture(scope="session")
def solitary_r4_profile():
    params = wv.solve_solitary(4, 0.3)
    return wv.sample_profile(params, wv.default_grid(params))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
