import pytest
from hypothesis import HealthCheck, settings

from coxsigns.coxeter import build_system

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def A2():
    return build_system("A2")


@pytest.fixture(scope="session")
def A3():
    return build_system("A3")


@pytest.fixture(scope="session")
def B2():
    return build_system("B2")


@pytest.fixture(scope="session")
def B3():
    return build_system("B3")


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance

    if test_acceptance.LINES:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.LINES:
            terminalreporter.write_line(line)
