import sys
from pathlib import Path

import pytest

TESTS = Path(__file__).resolve().parent
sys.path.insert(0, str(TESTS))

FIXTURES = TESTS / "fixtures"
GOLDEN = TESTS / "golden"


@pytest.fixture
def fixtures():
    return FIXTURES


@pytest.fixture
def golden():
    return GOLDEN
