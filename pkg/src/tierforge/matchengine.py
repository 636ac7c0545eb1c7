"""Inverted index, match sets and clause-based tier classifiers.

A query or document is routed to Tier 1 when it contains at least one
selected clause as a subset. Because every document in ``match(q)``
contains all of ``q``'s terms, it also contains the clause that routed
``q`` and is therefore itself in Tier 1.
"""
from __future__ import annotations

from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .corpus import Corpus, DataError, Vocabulary, tokenize

__all__ = [
    "DocSet",
    "InvertedIndex",
    "ClauseIndex",
    "build_index",
    "match",
    "classify_query",
    "classify_document",
    "canonical_clause",
    "clause_sort_key",
    "write_clauses",
    "read_clauses",
]

_ID_DTYPE = np.int32


class DocSet:
    """Immutable set of document ids backed by a sorted int32 array."""

    __slots__ = ("ids",)

    def __init__(self, ids: Iterable[int] | np.ndarray = (), *, _trusted: bool = False):
        if _trusted:
            arr = ids
        else:
            arr = np.unique(np.asarray(list(ids) if not isinstance(ids, np.ndarray) else ids, dtype=_ID_DTYPE))
        arr.setflags(write=False)
        self.ids = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "DocSet":
        return cls(np.ascontiguousarray(arr, dtype=_ID_DTYPE), _trusted=True)

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> "DocSet":
        return cls._wrap(np.flatnonzero(mask))

    def to_mask(self, n_docs: int) -> np.ndarray:
        mask = np.zeros(n_docs, dtype=bool)
        mask[self.ids] = True
        return mask

    def __len__(self) -> int:
        return int(self.ids.size)

    def __iter__(self) -> Iterator[int]:
        return iter(self.ids.tolist())

    def __contains__(self, doc_id: int) -> bool:
        i = np.searchsorted(self.ids, doc_id)
        return bool(i < self.ids.size and self.ids[i] == doc_id)

    def __and__(self, other: "DocSet") -> "DocSet":
        return DocSet._wrap(np.intersect1d(self.ids, other.ids, assume_unique=True))

    def __or__(self, other: "DocSet") -> "DocSet":
        return DocSet._wrap(np.union1d(self.ids, other.ids))

    def __sub__(self, other: "DocSet") -> "DocSet":
        return DocSet._wrap(np.setdiff1d(self.ids, other.ids, assume_unique=True))

    def __eq__(self, other) -> bool:
        if isinstance(other, DocSet):
            return np.array_equal(self.ids, other.ids)
        if isinstance(other, (set, frozenset)):
            return set(self.ids.tolist()) == other
        return NotImplemented

    def __hash__(self):
        return hash(self.ids.tobytes())

    def issubset(self, other: "DocSet") -> bool:
        if len(self) > len(other):
            return False
        pos = np.searchsorted(other.ids, self.ids)
        pos[pos == other.ids.size] = 0
        return bool(np.all(other.ids[pos] == self.ids)) if self.ids.size else True

    def __repr__(self) -> str:
        shown = self.ids[:8].tolist()
        more = ", ..." if self.ids.size > 8 else ""
        return f"DocSet({shown}{more}, n={self.ids.size})"

    @staticmethod
    def union_all(sets: Iterable["DocSet"], n_docs: int) -> "DocSet":
        mask = np.zeros(n_docs, dtype=bool)
        for s in sets:
            mask[s.ids] = True
        return DocSet.from_mask(mask)


EMPTY = DocSet._wrap(np.empty(0, dtype=_ID_DTYPE))


class InvertedIndex:
    """Term id -> posting list. Terms never seen in the corpus map to the empty set."""

    def __init__(self, postings: dict[int, DocSet], n_docs: int):
        self.postings = postings
        self.n_docs = n_docs

    def posting(self, term: int) -> DocSet:
        return self.postings.get(term, EMPTY)

    def __len__(self) -> int:
        return len(self.postings)

    def match(self, terms: Sequence[int]) -> DocSet:
        return match(self, terms)


def build_index(corpus: Corpus) -> InvertedIndex:
    lists: dict[int, list[int]] = {}
    for d in corpus.documents:
        for t in d.terms:
            lists.setdefault(t, []).append(d.doc_id)
    # doc ids are visited in increasing order so each list is already sorted
    postings = {t: DocSet._wrap(np.asarray(ids, dtype=_ID_DTYPE)) for t, ids in lists.items()}
    return InvertedIndex(postings, corpus.n_docs)


def match(index: InvertedIndex, terms: Sequence[int]) -> DocSet:
    """Documents containing every term, intersected smallest posting first."""
    terms = list(terms)
    if not terms:
        raise ValueError("empty query")
    lists = sorted((index.posting(t) for t in terms), key=len)
    acc = lists[0].ids
    for p in lists[1:]:
        if acc.size == 0:
            break
        acc = np.intersect1d(acc, p.ids, assume_unique=True)
    return DocSet._wrap(acc)


def canonical_clause(terms: Iterable[int]) -> tuple[int, ...]:
    clause = tuple(sorted(set(terms)))
    if not clause:
        raise ValueError("clauses must be non-empty")
    return clause


def clause_sort_key(clause: Sequence[int]):
    """Canonical clause order: shorter first, then lexicographic by term id."""
    return (len(clause), tuple(clause))


class ClauseIndex:
    """Answers "does the term set contain some selected clause?".

    Each term points to the clauses that contain it; a clause fires once
    all of its terms have been hit.
    """

    def __init__(self, clauses: Iterable[Sequence[int]] = ()):
        uniq = sorted({canonical_clause(c) for c in clauses}, key=clause_sort_key)
        self.clauses: list[tuple[int, ...]] = uniq
        self._lengths = [len(c) for c in uniq]
        self._by_term: dict[int, list[int]] = {}
        for k, c in enumerate(uniq):
            for t in c:
                self._by_term.setdefault(t, []).append(k)

    def __len__(self) -> int:
        return len(self.clauses)

    def __iter__(self):
        return iter(self.clauses)

    def find(self, terms: Iterable[int]) -> tuple[int, ...] | None:
        """Return the first selected clause contained in ``terms``, if any."""
        hits: dict[int, int] = {}
        best = None
        for t in set(terms):
            for k in self._by_term.get(t, ()):
                h = hits.get(k, 0) + 1
                hits[k] = h
                if h == self._lengths[k] and (best is None or k < best):
                    best = k
        return None if best is None else self.clauses[best]

    def contains(self, terms: Iterable[int]) -> bool:
        hits: dict[int, int] = {}
        lengths = self._lengths
        for t in set(terms):
            for k in self._by_term.get(t, ()):
                h = hits.get(k, 0) + 1
                if h == lengths[k]:
                    return True
                hits[k] = h
        return False

    def tier1_documents(self, index: InvertedIndex) -> DocSet:
        """Union of the match sets of all selected clauses."""
        return DocSet.union_all((match(index, c) for c in self.clauses), index.n_docs)


def _terms(item) -> Sequence[int]:
    return getattr(item, "terms", item)


def classify_query(ci: ClauseIndex, q) -> int:
    terms = _terms(q)
    if not terms:
        raise ValueError("empty query")
    return 1 if ci.contains(terms) else 2


def classify_document(ci: ClauseIndex, d) -> int:
    return 1 if ci.contains(_terms(d)) else 2


def write_clauses(clauses: Iterable[Sequence[int]], vocab: Vocabulary, path: str | Path,
                  header: str | None = None, supports: dict | None = None) -> None:
    """One clause per line in canonical order; optional ``support<TAB>`` column."""
    ordered = sorted({canonical_clause(c) for c in clauses}, key=clause_sort_key)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if header:
            fh.write(f"{header}\n")
        for c in ordered:
            text = " ".join(vocab.terms_of(c))
            if supports is not None:
                fh.write(f"{supports[c]}\t{text}\n")
            else:
                fh.write(f"{text}\n")


def read_clauses(path: str | Path, vocab: Vocabulary) -> tuple[list[tuple[int, ...]], dict[str, str]]:
    """Read a clause file. Returns clauses and any ``#key=value`` header fields.

    Terms not in ``vocab`` are interned; such clauses simply match nothing.
    """
    clauses = []
    meta: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if line.startswith("#"):
                if "=" in line:
                    key, value = line[1:].split("=", 1)
                    meta[key.strip()] = value.strip()
                continue
            if "\t" in line:
                line = line.split("\t", 1)[1]
            terms = tokenize(line)
            if not terms:
                raise DataError(f"{path}:{lineno}: empty clause")
            clauses.append(vocab.ids_of(terms))
    return clauses, meta
