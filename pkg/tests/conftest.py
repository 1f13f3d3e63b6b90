from pathlib import Path

import pytest

from slorkit.corpus import Sentence

DATA_DIR = Path(__file__).parent / "data"
FIXTURE_CORPUS = DATA_DIR / "fixture_corpus.txt"


@pytest.fixture(scope="session")
def fixture_sentences():
    return [
        Sentence.from_text(ln.strip())
        for ln in FIXTURE_CORPUS.read_text().splitlines()
        if ln.strip()
    ]


@pytest.fixture(scope="session")
def fixture_token_lists(fixture_sentences):
    return [list(s.tokens) for s in fixture_sentences]
