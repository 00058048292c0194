import numpy as np
import pytest

from fracbvm import build_spatial_operator, gaussian_pulse_problem
from fracbvm.blocksystem import assemble_block_system
from fracbvm.experiments import default_scheme


@pytest.fixture(scope="session")
def scheme():
    return default_scheme()


@pytest.fixture(scope="session")
def problem12():
    return gaussian_pulse_problem(1.2)


@pytest.fixture(scope="session")
def problem15():
    return gaussian_pulse_problem(1.5)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def small_system(scheme, problem12):
    """8x12 auxiliary-assembled block system, small enough for dense checks."""
    return assemble_block_system(scheme, problem12, 8, 12, assembly="auxiliary")


@pytest.fixture(scope="session")
def small_op(problem15):
    return build_spatial_operator(problem15, 16)
