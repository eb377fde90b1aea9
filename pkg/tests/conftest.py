import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from diaganno import fixtures
from diaganno.registry import default_registry


@pytest.fixture()
def original_doc():
    return fixtures.rock_cycle_original()


@pytest.fixture()
def decomposed_doc():
    return fixtures.rock_cycle_decomposed()


@pytest.fixture(scope="session")
def registry():
    return default_registry()


@pytest.fixture(scope="session")
def corpus_root():
    return fixtures.corpus_root()
