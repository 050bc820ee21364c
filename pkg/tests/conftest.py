from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from ielc.corpus import generate_corpus

# term generation is slow-ish and timing varies, so no per-example deadline
settings.register_profile("ielc", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ielc")

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def corpus():
    # the 1000-term corpus is shared by the reduction, translation and acceptance tests
    return generate_corpus(1000, seed=0, max_size=30)


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


# one line per acceptance criterion, collected by tests/test_acceptance.py
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
