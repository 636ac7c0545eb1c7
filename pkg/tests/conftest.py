import pytest

from tierforge.corpus import Corpus, QueryLog
from tierforge.matchengine import build_index
from tierforge.evaluation import random_scsk_instance

SHIRT_DOCS = [
    "red shirt striped",
    "blue shirt striped",
    "red shirt",
    "red pants striped",
    "blue pants striped",
    "blue pants",
]
TOY_LOG = [("red shirt", 3), ("blue pants", 2), ("red", 1)]


@pytest.fixture
def shirts():
    return Corpus.from_texts(SHIRT_DOCS)


@pytest.fixture
def shirt_index(shirts):
    return build_index(shirts)


@pytest.fixture
def toy_log(shirts):
    return QueryLog.from_texts(TOY_LOG, shirts.vocab)


@pytest.fixture
def ids(shirts):
    def _ids(text):
        return shirts.vocab.ids_of(text.split())
    return _ids


def random_instance(rng, n_cand, n_docs=None, n_queries=None, max_w=5, density=0.3):
    """Random coverage pair (f over weighted queries, g over documents)."""
    return random_scsk_instance(rng, n_cand, n_docs, n_queries, max_w, density)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
