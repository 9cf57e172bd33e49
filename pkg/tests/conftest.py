import pytest
from hypothesis import HealthCheck, settings

from heinzlab.heinz import HeinzProfile
from heinzlab.harness import make_instance
from heinzlab.norms import NormKind

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def profile():
    return HeinzProfile(make_instance(7, 4, NormKind.trace()))

