import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "ffvar", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("ffvar")

_VERDICT_LINES = []


@pytest.fixture
def record_verdict():
    return _VERDICT_LINES.append


def pytest_terminal_summary(terminalreporter):
    if _VERDICT_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICT_LINES:
            terminalreporter.write_line(line)
