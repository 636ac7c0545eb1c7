import pytest

from tierforge.corpus import (
    Corpus,
    DataError,
    QueryLog,
    Vocabulary,
    load_corpus,
    load_query_log,
    write_corpus,
    write_query_log,
)
from tierforge.matchengine import build_index, match

from conftest import SHIRT_DOCS


@pytest.fixture
def shirts_file(tmp_path):
    p = tmp_path / "corpus.tsv"
    p.write_text("# six documents\n" + "".join(f"{i}\t{t}\n" for i, t in enumerate(SHIRT_DOCS)), encoding="utf-8")
    return p


def test_load_shirts(shirts_file):
    c = load_corpus(shirts_file)
    assert c.n_docs == 6
    assert len(c.vocab) == 5
    assert c[0].terms == c.vocab.ids_of(["red", "shirt", "striped"])


def test_dash_ids_use_line_order(tmp_path):
    p = tmp_path / "c.tsv"
    p.write_text("-\tb a\n-\tc\n", encoding="utf-8")
    c = load_corpus(p)
    assert [d.doc_id for d in c.documents] == [0, 1]


def test_duplicate_terms_collapse(tmp_path):
    p = tmp_path / "c.tsv"
    p.write_text("0\tRed red SHIRT\n", encoding="utf-8")
    assert len(load_corpus(p)[0].terms) == 2


@pytest.mark.parametrize("text, message", [
    ("", "empty corpus"),
    ("# only a comment\n", "empty corpus"),
    ("0\tred\nbad line\n", ":2:"),
    ("0\tred\n0\tblue\n", "duplicate doc_id"),
    ("0\t   \n", "empty document"),
    ("1\tred\n", "cover 0..0"),
])
def test_corpus_errors(tmp_path, text, message):
    p = tmp_path / "c.tsv"
    p.write_text(text, encoding="utf-8")
    with pytest.raises(DataError, match=message):
        load_corpus(p)


def test_query_log_merges_duplicates(tmp_path, shirts):
    p = tmp_path / "q.tsv"
    p.write_text("red shirt\nshirt red\nblue pants\n", encoding="utf-8")
    log = load_query_log(p, shirts.vocab)
    assert len(log) == 2
    assert sorted(q.weight for q in log) == [1, 2]
    assert log.n == 3


def test_query_log_count_column(tmp_path, shirts):
    p = tmp_path / "q.tsv"
    p.write_text("3\tred\n", encoding="utf-8")
    log = load_query_log(p, shirts.vocab)
    assert len(log) == 1 and log[0].weight == 3 and log.n == 3


@pytest.mark.parametrize("count", ["0", "-2"])
def test_query_log_rejects_nonpositive_counts(tmp_path, shirts, count):
    p = tmp_path / "q.tsv"
    p.write_text(f"{count}\tred\n", encoding="utf-8")
    with pytest.raises(DataError, match="positive"):
        load_query_log(p, shirts.vocab)


def test_query_log_skips_blank_lines(tmp_path, shirts):
    p = tmp_path / "q.tsv"
    p.write_text("red\n\n   \nblue\n", encoding="utf-8")
    log = load_query_log(p, shirts.vocab)
    assert log.skipped == 2 and log.n == 2


def test_unseen_query_term_is_interned_and_matches_nothing(tmp_path, shirts):
    p = tmp_path / "q.tsv"
    p.write_text("green\n", encoding="utf-8")
    n_before = len(shirts.vocab)
    log = load_query_log(p, shirts.vocab)
    assert len(shirts.vocab) == n_before + 1
    index = build_index(shirts)
    assert len(match(index, log[0].terms)) == 0
    # independent check: no document line contains the word
    assert not any("green" in line.split() for line in SHIRT_DOCS)


def test_corpus_round_trip(tmp_path, shirts_file):
    c = load_corpus(shirts_file)
    out = tmp_path / "again.tsv"
    write_corpus(c, out)
    again = load_corpus(out)
    assert [d.terms for d in again.documents] == [d.terms for d in c.documents]


def test_query_log_round_trip_preserves_total(tmp_path, shirts):
    log = QueryLog.from_texts([("red shirt", 3), "blue", "blue"], shirts.vocab)
    p = tmp_path / "q.tsv"
    write_query_log(log, shirts.vocab, p)
    again = load_query_log(p, shirts.vocab)
    assert again.n == log.n == 5
    assert sum(q.weight for q in again) == again.n


def test_interning_is_injective():
    v = Vocabulary()
    words = ["a", "b", "a", "c", "b", "d"]
    ids = [v.intern(w) for w in words]
    assert len(set(ids)) == len(set(words))
    assert [v.term(i) for i in ids] == words


def test_empty_query_rejected(shirts):
    with pytest.raises(DataError):
        QueryLog.from_texts(["   "], shirts.vocab)


def test_corpus_from_texts_rejects_empty():
    with pytest.raises(DataError):
        Corpus.from_texts([])
