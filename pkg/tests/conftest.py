import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mealyburnside.io import load_fixture  # noqa: E402

JUNGLE_FIXTURES = ["jungle3_order8", "jungle3_order4", "jungle3_trunk32", "jungle3_trunk33",
                   "jungle3_trunk3322", "cycle5", "composite4_two_classes", "composite4_trunk422"]
PRIME_JUNGLE_FIXTURES = [f for f in JUNGLE_FIXTURES if not f.startswith("composite")]


@pytest.fixture(scope="session")
def bellaterra():
    return load_fixture("bellaterra")


@pytest.fixture(scope="session")
def identity2():
    return load_fixture("identity2")


_ACCEPTANCE = []


def record_acceptance(line):
    _ACCEPTANCE.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
