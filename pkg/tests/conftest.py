from pathlib import Path

import pytest

from rankcf.corpus import load_corpus
from rankcf.ranking import context_for

FIXTURES = Path(__file__).parent / "fixtures"
ARTICLES = FIXTURES / "articles.jsonl"
FIVE_DOCS = FIXTURES / "five_docs.jsonl"


@pytest.fixture(scope="session")
def articles():
    return load_corpus(ARTICLES)


@pytest.fixture(scope="session")
def articles_ctx(articles):
    return context_for(articles)
