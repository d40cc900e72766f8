import pytest

from femtocap.model import NetworkConfig


@pytest.fixture(scope="session")
def cfg():
    """Reference parameter set used throughout."""
    return NetworkConfig()
