import pytest
from hypothesis import settings

from chaoseeg import SystemSpec, generate

settings.register_profile("suite", deadline=None, max_examples=50)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def henon_series():
    return generate(SystemSpec("henon", n=10_000, transient=1000))


@pytest.fixture(scope="session")
def logistic_series():
    return generate(SystemSpec("logistic", n=10_000, transient=100))


@pytest.fixture(scope="session")
def lorenz_series():
    # dt=0.01 -> sampling rate 100, so theiler defaults resolve as a flow
    return generate(SystemSpec("lorenz", n=10_000, transient=2000))
