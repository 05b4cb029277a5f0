import os

import pytest
from hypothesis import HealthCheck, settings

from gainterm.config import Config
from gainterm.partitions import set_ramp

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=400)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def cfg():
    return Config()


@pytest.fixture(autouse=True)
def _default_ramp():
    set_ramp("exp")
    yield
    set_ramp("exp")


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import LINES
    if LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(LINES):
            terminalreporter.write_line(LINES[n])
