import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tierforge.corpus import Corpus
from tierforge.matchengine import (
    ClauseIndex,
    DocSet,
    build_index,
    classify_document,
    classify_query,
    match,
    read_clauses,
    write_clauses,
)


def docs(*names):
    return {int(n[1:]) - 1 for n in names}


class TestMatch:
    def test_posting_of_red(self, shirt_index, ids):
        assert shirt_index.posting(ids("red")[0]) == docs("D1", "D3", "D4")

    def test_absent_term_has_empty_posting(self, shirt_index):
        assert len(shirt_index.posting(999)) == 0

    def test_posting_sizes_double_count(self, shirts, shirt_index):
        assert sum(len(p) for p in shirt_index.postings.values()) == sum(len(d.terms) for d in shirts)

    def test_red_shirt(self, shirt_index, ids):
        assert match(shirt_index, ids("red shirt")) == docs("D1", "D3")

    def test_blue_pants_striped(self, shirt_index, ids):
        assert match(shirt_index, ids("blue pants striped")) == docs("D5")

    def test_unseen_term(self, shirts, shirt_index):
        green = shirts.vocab.intern("green")
        assert len(match(shirt_index, [green])) == 0

    def test_empty_query_rejected(self, shirt_index):
        with pytest.raises(ValueError, match="empty query"):
            match(shirt_index, [])


class TestClassifiers:
    @pytest.fixture
    def ci(self, ids):
        return ClauseIndex([ids("red"), ids("blue shirt")])

    def test_query_with_clause(self, ci, ids):
        assert classify_query(ci, ids("blue shirt striped")) == 1

    def test_query_without_clause(self, ci, ids):
        assert classify_query(ci, ids("blue pants")) == 2

    def test_empty_selection(self, ids):
        assert classify_query(ClauseIndex(), ids("red")) == 2

    def test_documents(self, ci, shirts):
        tier1 = {d.doc_id for d in shirts if classify_document(ci, d) == 1}
        assert tier1 == docs("D1", "D2", "D3", "D4")
        assert classify_document(ci, shirts[5]) == 2

    def test_term_in_every_document(self, shirts):
        c = Corpus.from_texts(["a b", "a c", "a"])
        ci = ClauseIndex([c.vocab.ids_of(["a"])])
        assert all(classify_document(ci, d) == 1 for d in c)

    def test_tier1_documents_match_classifier(self, ci, shirts, shirt_index):
        by_classifier = {d.doc_id for d in shirts if classify_document(ci, d) == 1}
        assert ci.tier1_documents(shirt_index) == by_classifier

    def test_find_returns_canonical_first(self, ci, ids):
        assert ci.find(ids("red blue shirt")) == ids("red")

    def test_empty_clause_forbidden(self):
        with pytest.raises(ValueError):
            ClauseIndex([()])


def test_clause_file_round_trip(tmp_path, shirts, ids):
    clauses = [ids("blue shirt"), ids("red"), ids("red")]
    p = tmp_path / "clauses.txt"
    write_clauses(clauses, shirts.vocab, p)
    lines = p.read_text().splitlines()
    # terms are written in term-id order: shirt (1) before blue (3)
    assert lines == ["red", "shirt blue"]
    back, meta = read_clauses(p, shirts.vocab)
    assert sorted(back) == sorted({ids("blue shirt"), ids("red")})
    assert meta == {}


class TestDocSet:
    def test_ops(self):
        a, b = DocSet([1, 3, 5]), DocSet([3, 4])
        assert (a & b) == {3}
        assert (a | b) == {1, 3, 4, 5}
        assert (a - b) == {1, 5}
        assert 5 in a and 4 not in a
        assert DocSet([3]).issubset(a) and not b.issubset(a)
        assert DocSet.from_mask(a.to_mask(8)) == a

    @given(st.sets(st.integers(0, 200)), st.sets(st.integers(0, 200)))
    def test_matches_python_sets(self, x, y):
        a, b = DocSet(x), DocSet(y)
        assert (a & b) == (x & y)
        assert (a | b) == (x | y)
        assert (a - b) == (x - y)
        assert len(a) == len(x)
        assert a.issubset(b) == (x <= y)


def _random_corpus(rng, n_docs=80, vocab=15):
    texts = []
    for _ in range(n_docs):
        k = int(rng.integers(1, 7))
        texts.append([f"w{t}" for t in rng.choice(vocab, size=k, replace=False)])
    return Corpus.from_texts(texts)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_match_is_intersection_of_singletons(seed):
    rng = np.random.default_rng(seed)
    c = _random_corpus(rng)
    index = build_index(c)
    q = rng.choice(len(c.vocab), size=int(rng.integers(1, 4)), replace=False).tolist()
    expected = set(range(c.n_docs))
    for t in q:
        expected &= set(match(index, [t]))
    assert match(index, q) == expected
    assert match(index, q) == {d.doc_id for d in c if set(q) <= set(d.terms)}


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_clause_index_matches_naive_scan(seed):
    rng = np.random.default_rng(seed)
    clauses = [tuple(sorted(rng.choice(12, size=int(rng.integers(1, 4)), replace=False).tolist()))
               for _ in range(int(rng.integers(0, 8)))]
    ci = ClauseIndex(clauses)
    for _ in range(20):
        q = set(rng.choice(12, size=int(rng.integers(1, 6)), replace=False).tolist())
        naive = any(set(c) <= q for c in clauses)
        assert (classify_query(ci, q) == 1) == naive
