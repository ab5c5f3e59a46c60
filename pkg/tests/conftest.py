from pathlib import Path

import pytest

from alblid.corpus import load_article_corpus, split_train_test, texts_by_language
from alblid.profiles import ModelConfig, train_model_set

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
ARTICLES = FIXTURES / "articles.jsonl"
FOLDERS = FIXTURES / "folders"

# per-language split; leaves >= 200 held-out Albanian titles
TRAIN_FRACTION = 0.4
SPLIT_SEED = 7


@pytest.fixture(scope="session")
def articles():
    return load_article_corpus(ARTICLES, "articles")


@pytest.fixture(scope="session")
def split(articles):
    return split_train_test(articles, TRAIN_FRACTION, SPLIT_SEED, by_language=True)


@pytest.fixture(scope="session")
def clean_models(split):
    texts, domains = texts_by_language(split[0])
    return train_model_set(texts, ModelConfig(), domains)


@pytest.fixture
def small_config():
    return ModelConfig(ngram_min=2, ngram_max=2, rank_min=2, rank_max=2)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_RESULTS: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)
