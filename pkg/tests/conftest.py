import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT))

from services.exactlin.field import PrimeField  # noqa: E402


@pytest.fixture
def field():
    return PrimeField()


