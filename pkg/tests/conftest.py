import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from corpora import english_words  # noqa: E402

from splitindex import Dictionary, build_index, gen_noisy_queries  # noqa: E402


@pytest.fixture(scope="session")
def english_dictionary():
    """~0.8 MB pseudo-English dictionary shared by the heavier tests."""
    return Dictionary(english_words(800_000, seed=42))


@pytest.fixture(scope="session")
def english_index(english_dictionary):
    return build_index(english_dictionary, 1)


@pytest.fixture(scope="session")
def english_queries(english_dictionary):
    """Misspelling-style workload: noisy copies of dictionary words."""
    return gen_noisy_queries(english_dictionary, 4000, seed=7)
