import pytest

from needlemag import default_loop, reference_environment, reference_needle


@pytest.fixture(scope="session")
def needle():
    return reference_needle()


@pytest.fixture(scope="session")
def env():
    return reference_environment()


@pytest.fixture(scope="session")
def loop(needle):
    return default_loop(needle.geometry.length)
