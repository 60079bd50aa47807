import pytest
from hypothesis import HealthCheck, settings

from concatqec import builtin_codes

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def codes():
    return builtin_codes()
