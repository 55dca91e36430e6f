import pytest
from hypothesis import HealthCheck, settings

from gentlequivers.fixtures import NAMES, fixture

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

CRITERIA_LINES: list[str] = []


@pytest.fixture(scope="session")
def fixtures():
    return {name: fixture(name) for name in NAMES}


def pytest_terminal_summary(terminalreporter):
    if CRITERIA_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(CRITERIA_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
