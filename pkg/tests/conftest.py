import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fixtures import fixture_corpus, synthetic_sized_corpus  # noqa: E402


@pytest.fixture(scope="session")
def corpus():
    return fixture_corpus()


@pytest.fixture(scope="session")
def sized_corpus():
    return synthetic_sized_corpus()
