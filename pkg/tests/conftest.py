import numpy as np
import pytest
from hypothesis import settings

from pairphase import SystemParams

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture
def theta_params():
    return SystemParams(1.0, 0.0)


@pytest.fixture
def mu_params():
    # omega1 - omega2 = 1 so the MU cycle has unit frequency
    return SystemParams(1.4, 0.4)


def assert_valid_state(rho, tol=1e-10):
    rho = np.asarray(rho)
    assert np.allclose(rho, np.swapaxes(rho, -1, -2).conj(), atol=1e-12)
    assert np.allclose(np.trace(rho, axis1=-2, axis2=-1), 1.0, atol=tol)
    assert np.linalg.eigvalsh(rho).min() > -tol
