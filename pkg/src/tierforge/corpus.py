"""Corpus and query-log ingestion.

Terms are interned to dense integer ids in first-seen order: corpus terms
first, then any new terms met while reading query logs. Documents and
queries are stored as strictly increasing tuples of term ids.

File formats (UTF-8, one record per line, ``#`` lines are comments)::

    corpus:     doc_id<TAB>term term term
    query log:  [count<TAB>]term term term
"""
from __future__ import annotations

import logging
from collections import OrderedDict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

logger = logging.getLogger(__name__)

__all__ = [
    "DataError",
    "Vocabulary",
    "Document",
    "Query",
    "Corpus",
    "QueryLog",
    "load_corpus",
    "load_query_log",
    "write_corpus",
    "write_query_log",
    "tokenize",
]


class DataError(ValueError):
    """Raised for malformed or inconsistent input data."""


def tokenize(text: str) -> list[str]:
    return text.lower().split()


class Vocabulary:
    """Bidirectional term <-> id table with dense ids."""

    def __init__(self, terms: Iterable[str] = ()):
        self._ids: dict[str, int] = {}
        self._terms: list[str] = []
        for t in terms:
            self.intern(t)

    def intern(self, term: str) -> int:
        tid = self._ids.get(term)
        if tid is None:
            tid = len(self._terms)
            self._ids[term] = tid
            self._terms.append(term)
        return tid

    def get(self, term: str) -> int | None:
        return self._ids.get(term)

    def term(self, tid: int) -> str:
        return self._terms[tid]

    def terms_of(self, ids: Iterable[int]) -> list[str]:
        return [self._terms[i] for i in ids]

    def ids_of(self, terms: Iterable[str]) -> tuple[int, ...]:
        """Intern ``terms`` and return them as a sorted, deduplicated tuple."""
        return tuple(sorted({self.intern(t) for t in terms}))

    def __len__(self) -> int:
        return len(self._terms)

    def __contains__(self, term: str) -> bool:
        return term in self._ids


@dataclass(frozen=True)
class Document:
    doc_id: int
    terms: tuple[int, ...]

    def __post_init__(self):
        if not self.terms:
            raise DataError(f"document {self.doc_id} is empty")
        if any(a >= b for a, b in zip(self.terms, self.terms[1:])):
            raise DataError(f"document {self.doc_id} terms are not strictly increasing")


@dataclass(frozen=True)
class Query:
    terms: tuple[int, ...]
    weight: int = 1

    def __post_init__(self):
        if not self.terms:
            raise DataError("empty query")
        if self.weight < 1:
            raise DataError(f"query weight must be >= 1, got {self.weight}")
        if any(a >= b for a, b in zip(self.terms, self.terms[1:])):
            raise DataError("query terms are not strictly increasing")


@dataclass
class Corpus:
    documents: list[Document]
    vocab: Vocabulary

    def __post_init__(self):
        for i, d in enumerate(self.documents):
            if d.doc_id != i:
                raise DataError(f"doc ids must be 0..n-1, found {d.doc_id} at position {i}")

    @property
    def n_docs(self) -> int:
        return len(self.documents)

    def __len__(self) -> int:
        return len(self.documents)

    def __getitem__(self, i: int) -> Document:
        return self.documents[i]

    @classmethod
    def from_texts(cls, texts: Sequence[str | Sequence[str]], vocab: Vocabulary | None = None) -> "Corpus":
        """Build a corpus from whitespace-separated strings or term lists."""
        vocab = Vocabulary() if vocab is None else vocab
        docs = []
        for i, text in enumerate(texts):
            terms = tokenize(text) if isinstance(text, str) else [t.lower() for t in text]
            docs.append(Document(i, vocab.ids_of(terms)))
        if not docs:
            raise DataError("empty corpus")
        return cls(docs, vocab)


@dataclass
class QueryLog:
    queries: list[Query]
    skipped: int = 0
    _lookup: dict[tuple[int, ...], int] = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        seen = set()
        for q in self.queries:
            if q.terms in seen:
                raise DataError(f"duplicate query {q.terms}; merge weights first")
            seen.add(q.terms)
        if not self.queries:
            raise DataError("empty query log")

    @property
    def n(self) -> int:
        """Total weight, i.e. the number of logged query occurrences."""
        return sum(q.weight for q in self.queries)

    def __len__(self) -> int:
        return len(self.queries)

    def __iter__(self):
        return iter(self.queries)

    def __getitem__(self, i: int) -> Query:
        return self.queries[i]

    def index_of(self, terms: Sequence[int]) -> int | None:
        if self._lookup is None:
            self._lookup = {q.terms: i for i, q in enumerate(self.queries)}
        return self._lookup.get(tuple(terms))

    @classmethod
    def from_term_sets(cls, items: Iterable[tuple[Iterable[int], int]]) -> "QueryLog":
        """Merge ``(term ids, count)`` pairs into a deduplicated log."""
        merged: OrderedDict[tuple[int, ...], int] = OrderedDict()
        for terms, count in items:
            key = tuple(sorted(set(terms)))
            merged[key] = merged.get(key, 0) + count
        return cls([Query(t, w) for t, w in merged.items()])

    @classmethod
    def from_texts(cls, texts: Iterable[str | tuple[str, int]], vocab: Vocabulary) -> "QueryLog":
        """Build a log from strings (count 1) or ``(string, count)`` pairs."""
        items = []
        for item in texts:
            text, count = (item, 1) if isinstance(item, str) else item
            items.append((vocab.ids_of(tokenize(text)), count))
        return cls.from_term_sets(items)


def _content_lines(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if line.startswith("#"):
                continue
            yield lineno, line


def load_corpus(path: str | Path) -> Corpus:
    """Read a ``doc_id<TAB>terms`` file.

    A ``-`` in the id column means "use the line order". Explicit ids must
    form a permutation of ``0..n-1``.
    """
    vocab = Vocabulary()
    rows: dict[int, tuple[int, ...]] = {}
    position = 0
    for lineno, line in _content_lines(path):
        if not line.strip():
            continue
        parts = line.split("\t", 1)
        if len(parts) != 2:
            raise DataError(f"{path}:{lineno}: expected 'doc_id<TAB>terms'")
        id_text, text = parts
        id_text = id_text.strip()
        if id_text == "-":
            doc_id = position
        else:
            try:
                doc_id = int(id_text)
            except ValueError:
                raise DataError(f"{path}:{lineno}: bad doc_id {id_text!r}") from None
            if doc_id < 0:
                raise DataError(f"{path}:{lineno}: negative doc_id {doc_id}")
        if doc_id in rows:
            raise DataError(f"{path}:{lineno}: duplicate doc_id {doc_id}")
        terms = tokenize(text)
        if not terms:
            raise DataError(f"{path}:{lineno}: empty document {doc_id}")
        rows[doc_id] = vocab.ids_of(terms)
        position += 1
    if not rows:
        raise DataError("empty corpus")
    if sorted(rows) != list(range(len(rows))):
        raise DataError(f"{path}: doc ids must cover 0..{len(rows) - 1} exactly")
    return Corpus([Document(i, rows[i]) for i in range(len(rows))], vocab)


def load_query_log(path: str | Path, vocab: Vocabulary) -> QueryLog:
    """Read a query log, interning unseen terms into ``vocab``.

    Blank lines are skipped and counted in ``QueryLog.skipped``.
    """
    items = []
    skipped = 0
    for lineno, line in _content_lines(path):
        if "\t" in line:
            count_text, text = line.split("\t", 1)
            try:
                count = int(count_text)
            except ValueError:
                raise DataError(f"{path}:{lineno}: bad count {count_text!r}") from None
            if count <= 0:
                raise DataError(f"{path}:{lineno}: count must be positive, got {count}")
        else:
            count, text = 1, line
        terms = tokenize(text)
        if not terms:
            skipped += 1
            continue
        items.append((vocab.ids_of(terms), count))
    if skipped:
        logger.warning("%s: skipped %d empty lines", path, skipped)
    log = QueryLog.from_term_sets(items)
    log.skipped = skipped
    return log


def write_corpus(corpus: Corpus, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for d in corpus.documents:
            fh.write(f"{d.doc_id}\t{' '.join(corpus.vocab.terms_of(d.terms))}\n")


def write_query_log(log: QueryLog, vocab: Vocabulary, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for q in log.queries:
            fh.write(f"{q.weight}\t{' '.join(vocab.terms_of(q.terms))}\n")
