import pytest
from hypothesis import HealthCheck, settings

from liebialg.catalog import load_catalog

settings.register_profile("default", deadline=None, max_examples=30,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# acceptance verdict lines, printed in the terminal summary
CRITERIA = []


@pytest.fixture(scope="session")
def catalog():
    return load_catalog()


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(CRITERIA, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
