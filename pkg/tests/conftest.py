import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "meanlab",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("meanlab")


@pytest.fixture(scope="session", autouse=True)
def warm_kernel():
    # compile the eigensolver once so timed tests measure algorithm cost
    from meanlab.hpd import _eigh

    _eigh(np.eye(2, dtype=np.complex128))


@pytest.fixture
def tol8():
    from meanlab.orders import ToleranceProfile

    return ToleranceProfile(psd_margin=1e-8)
