"""Query-selection tiering baselines.

These pick a set of *whole logged queries* for Tier 1. Tier 1 holds the
union of their match sets, and a query is served by Tier 1 only if its
exact term set was selected, so queries never seen in training always go
to Tier 2.

* ``popularity``: score each document by the query weight that matches it,
  keep the top ``B`` documents, select every logged query whose (non-empty)
  match set fits inside them.
* ``flowmax``: as above with score = weight of the heaviest matching query.
* ``flowgreedy``: select queries directly with the cost-benefit greedy,
  objective = selected weight / n, cost = |union of match sets|.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .corpus import Corpus, QueryLog, Vocabulary
from .matchengine import DocSet, InvertedIndex, clause_sort_key, match, read_clauses, write_clauses
from .scsk import SolutionPath, solve
from .submodfn import Coverage

__all__ = [
    "QuerySelection",
    "query_match_sets",
    "popularity_baseline",
    "flowmax_baseline",
    "flow_greedy_baseline",
    "classify_by_query_selection",
    "write_selection",
    "read_selection",
    "BASELINES",
]


@dataclass
class QuerySelection:
    queries: list[tuple[int, ...]]
    tier1_docs: DocSet
    method: str = ""
    path: SolutionPath | None = field(default=None, repr=False)

    def __post_init__(self):
        self.queries = sorted(set(self.queries), key=clause_sort_key)
        self._table = frozenset(self.queries)

    def __len__(self) -> int:
        return len(self.queries)

    def __contains__(self, terms) -> bool:
        return tuple(sorted(set(terms))) in self._table

    def classify(self, q) -> int:
        return classify_by_query_selection(self, q)

    def __call__(self, q) -> int:
        return self.classify(q)


def classify_by_query_selection(sel: QuerySelection, q) -> int:
    terms = getattr(q, "terms", q)
    return 1 if tuple(sorted(set(terms))) in sel._table else 2


def query_match_sets(log: QueryLog, index: InvertedIndex) -> list[DocSet]:
    return [match(index, q.terms) for q in log.queries]


def _concat(match_sets: Sequence[DocSet]):
    lens = np.array([len(m) for m in match_sets], dtype=np.int64)
    ids = np.concatenate([m.ids for m in match_sets]) if match_sets else np.zeros(0, np.int32)
    return ids, lens


def _select_by_score(score: np.ndarray, budget: int, log: QueryLog, match_sets, method: str) -> QuerySelection:
    n_docs = score.size
    if not 1 <= budget <= n_docs:
        raise ValueError(f"budget must be in [1, {n_docs}], got {budget}")
    doc_ids = np.arange(n_docs)
    top = np.lexsort((doc_ids, -score))[:budget]
    mask = np.zeros(n_docs, dtype=bool)
    mask[top] = True
    chosen = [q.terms for q, m in zip(log.queries, match_sets) if len(m) and mask[m.ids].all()]
    return QuerySelection(chosen, DocSet.from_mask(mask), method)


def popularity_baseline(corpus: Corpus, log: QueryLog, index: InvertedIndex, budget: int,
                        match_sets: Sequence[DocSet] | None = None) -> QuerySelection:
    """Top-``budget`` documents by total weight of matching queries (ties: lower doc id)."""
    match_sets = query_match_sets(log, index) if match_sets is None else match_sets
    ids, lens = _concat(match_sets)
    weights = np.repeat([q.weight for q in log.queries], lens)
    score = np.bincount(ids, weights=weights, minlength=corpus.n_docs).astype(np.int64)
    return _select_by_score(score, budget, log, match_sets, "popularity")


def flowmax_baseline(corpus: Corpus, log: QueryLog, index: InvertedIndex, budget: int,
                     match_sets: Sequence[DocSet] | None = None) -> QuerySelection:
    """Top-``budget`` documents by weight of the heaviest matching query."""
    match_sets = query_match_sets(log, index) if match_sets is None else match_sets
    ids, lens = _concat(match_sets)
    weights = np.repeat(np.array([q.weight for q in log.queries], dtype=np.int64), lens)
    score = np.zeros(corpus.n_docs, dtype=np.int64)
    np.maximum.at(score, ids, weights)
    return _select_by_score(score, budget, log, match_sets, "flowmax")


def flow_greedy_baseline(corpus: Corpus, log: QueryLog, index: InvertedIndex, budget: int,
                         match_sets: Sequence[DocSet] | None = None, algorithm: str = "incremental",
                         threads: int = 1) -> QuerySelection:
    """Select whole queries with the ratio greedy.

    ``algorithm`` defaults to the incremental variant, which picks the same
    sequence as the plain greedy and scales to tens of thousands of queries.
    """
    if not 1 <= budget <= corpus.n_docs:
        raise ValueError(f"budget must be in [1, {corpus.n_docs}], got {budget}")
    match_sets = query_match_sets(log, index) if match_sets is None else match_sets
    order = sorted(range(len(log)), key=lambda i: clause_sort_key(log.queries[i].terms))
    weights = np.array([q.weight for q in log.queries], dtype=np.int64)
    f = Coverage(np.arange(len(order) + 1), np.asarray(order, dtype=np.int32), len(log), weights)
    g = Coverage.from_sets([match_sets[i].ids for i in order], corpus.n_docs)
    X, path = solve(algorithm, f, g, budget, threads=threads)
    chosen = [log.queries[order[k]].terms for k in X]
    tier1 = DocSet.union_all((match_sets[order[k]] for k in X), corpus.n_docs)
    return QuerySelection(chosen, tier1, "flowgreedy", path)


BASELINES = {
    "popularity": popularity_baseline,
    "flowmax": flowmax_baseline,
    "flowgreedy": flow_greedy_baseline,
}


def write_selection(sel: QuerySelection, vocab: Vocabulary, path: str | Path) -> None:
    write_clauses(sel.queries, vocab, path, header=f"#type=query\n#method={sel.method}")


def read_selection(path: str | Path, vocab: Vocabulary, index: InvertedIndex) -> QuerySelection:
    queries, meta = read_clauses(path, vocab)
    if meta.get("type") != "query":
        raise ValueError(f"{path} is not a query selection file")
    tier1 = DocSet.union_all((match(index, q) for q in queries), index.n_docs)
    return QuerySelection(queries, tier1, meta.get("method", ""))
