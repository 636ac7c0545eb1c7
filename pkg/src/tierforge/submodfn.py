"""Query-coverage objective and document-coverage constraint.

Both functions are weighted set coverage over a fixed universe:

* the objective covers *queries*: clause ``c`` covers every logged query
  that contains it, weighted by the query's count; ``f(X)`` is the covered
  weight divided by the log size ``n``;
* the constraint covers *documents*: clause ``c`` covers ``match(c)``, each
  document with weight 1; ``g(X) = |union of match(c)|``.

:class:`Coverage` is the oracle the solvers talk to. All values are
integers (the objective keeps its numerator; ``n`` is the fixed
denominator) so ratio comparisons can be made exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .corpus import QueryLog
from .matchengine import DocSet, InvertedIndex, canonical_clause, clause_sort_key, match

__all__ = [
    "Coverage",
    "ClauseStats",
    "CoverageState",
    "precompute_stats",
    "f_gain",
    "g_gain",
    "commit",
]


def _segment_sums(values: np.ndarray, lengths: np.ndarray) -> np.ndarray:
    """Sum consecutive runs of ``values`` with the given run lengths (empty runs allowed)."""
    csum = np.zeros(values.size + 1, dtype=np.int64)
    np.cumsum(values, out=csum[1:])
    ends = np.cumsum(lengths)
    return csum[ends] - csum[ends - lengths]


class Coverage:
    """Monotone submodular weighted-coverage function with incremental state.

    Row ``j`` of the CSR pair ``(indptr, indices)`` lists the universe
    elements covered by candidate ``j``. The object holds the current
    solution's covered mask; :meth:`gain` and :meth:`gains` are pure reads
    and :meth:`commit` is the only mutator. ``evaluations`` counts exact
    gain evaluations (one per candidate).
    """

    def __init__(self, indptr, indices, n_elements: int, weights=None):
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int32)
        self.n_elements = int(n_elements)
        if weights is None:
            self.weights = None
            self.total = self.n_elements
        else:
            self.weights = np.asarray(weights, dtype=np.int64)
            if self.weights.shape != (self.n_elements,):
                raise ValueError("weights must have one entry per universe element")
            if np.any(self.weights < 0):
                raise ValueError("weights must be non-negative")
            self.total = int(self.weights.sum())
        self.lengths = np.diff(self.indptr)
        self.covered = np.zeros(self.n_elements, dtype=bool)
        self.value = 0
        self.evaluations = 0

    @property
    def n_candidates(self) -> int:
        return self.indptr.size - 1

    def fresh(self) -> "Coverage":
        """A new oracle over the same incidence, at the empty solution."""
        new = object.__new__(Coverage)
        new.indptr, new.indices, new.n_elements = self.indptr, self.indices, self.n_elements
        new.weights, new.total, new.lengths = self.weights, self.total, self.lengths
        new.covered = np.zeros(self.n_elements, dtype=bool)
        new.value = 0
        new.evaluations = 0
        return new

    def copy(self) -> "Coverage":
        new = self.fresh()
        new.covered = self.covered.copy()
        new.value = self.value
        return new

    def elements(self, j: int) -> np.ndarray:
        return self.indices[self.indptr[j]:self.indptr[j + 1]]

    def _weight_of(self, elems: np.ndarray) -> int:
        if self.weights is None:
            return int(elems.size)
        return int(self.weights[elems].sum())

    def singleton(self, j: int) -> int:
        return self._weight_of(self.elements(j))

    def singletons(self) -> np.ndarray:
        if self.weights is None:
            return self.lengths.copy()
        return _segment_sums(self.weights[self.indices], self.lengths)

    def gain(self, j: int) -> int:
        self.evaluations += 1
        elems = self.elements(j)
        fresh = elems[~self.covered[elems]]
        return self._weight_of(fresh)

    def gains(self, js: Sequence[int] | np.ndarray) -> np.ndarray:
        """Exact gains for a batch of candidates, vectorized."""
        js = np.asarray(js, dtype=np.int64)
        self.evaluations += int(js.size)
        if js.size == 0:
            return np.zeros(0, dtype=np.int64)
        lens = self.lengths[js]
        total = int(lens.sum())
        if total == 0:
            return np.zeros(js.size, dtype=np.int64)
        # positions of every element of every requested row, concatenated
        starts = self.indptr[js]
        offsets = np.repeat(starts - np.cumsum(lens) + lens, lens)
        pos = offsets + np.arange(total, dtype=np.int64)
        elems = self.indices[pos]
        uncovered = ~self.covered[elems]
        if self.weights is None:
            vals = uncovered.astype(np.int64)
        else:
            vals = np.where(uncovered, self.weights[elems], 0)
        return _segment_sums(vals, lens)

    def commit(self, j: int) -> int:
        """Add candidate ``j``; returns the realized gain."""
        elems = self.elements(j)
        fresh = elems[~self.covered[elems]]
        self.covered[fresh] = True
        g = self._weight_of(fresh)
        self.value += g
        return g

    def evaluate(self, X: Iterable[int]) -> int:
        """Value of an arbitrary set, from scratch; does not touch the state."""
        mask = np.zeros(self.n_elements, dtype=bool)
        for j in X:
            mask[self.elements(j)] = True
        if self.weights is None:
            return int(mask.sum())
        return int(self.weights[mask].sum())

    def transpose(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR ``(indptr, rows)`` mapping each universe element to the candidates covering it."""
        rows = np.repeat(np.arange(self.n_candidates, dtype=np.int32), self.lengths)
        order = np.argsort(self.indices, kind="stable")
        indptr = np.zeros(self.n_elements + 1, dtype=np.int64)
        np.cumsum(np.bincount(self.indices, minlength=self.n_elements), out=indptr[1:])
        return indptr, rows[order]

    def exclusive(self, X: Iterable[int] | None = None) -> np.ndarray:
        """``value(X) - value(X minus j)`` for every candidate ``j``.

        With ``X`` omitted the whole candidate set is used. Computed with
        one pass of per-element multiplicity counting; entries for
        candidates outside ``X`` are 0.
        """
        if X is None:
            rows = np.arange(self.n_candidates)
        else:
            rows = np.asarray(sorted(set(X)), dtype=np.int64)
        out = np.zeros(self.n_candidates, dtype=np.int64)
        if rows.size == 0:
            return out
        lens = self.lengths[rows]
        total = int(lens.sum())
        if total == 0:
            return out
        offsets = np.repeat(self.indptr[rows] - np.cumsum(lens) + lens, lens)
        elems = self.indices[offsets + np.arange(total, dtype=np.int64)]
        mult = np.bincount(elems, minlength=self.n_elements)
        solo = mult[elems] == 1
        if self.weights is None:
            vals = solo.astype(np.int64)
        else:
            vals = np.where(solo, self.weights[elems], 0)
        out[rows] = _segment_sums(vals, lens)
        return out

    @classmethod
    def from_sets(cls, sets: Sequence[Iterable[int]], n_elements: int, weights=None) -> "Coverage":
        rows = [np.unique(np.asarray(list(s), dtype=np.int32)) for s in sets]
        indptr = np.zeros(len(rows) + 1, dtype=np.int64)
        if rows:
            np.cumsum([r.size for r in rows], out=indptr[1:])
        indices = np.concatenate(rows) if rows else np.zeros(0, dtype=np.int32)
        return cls(indptr, indices, n_elements, weights)


@dataclass
class ClauseStats:
    """Per-candidate primitives, with candidates in canonical clause order.

    ``objective`` covers log queries (weights = query counts, denominator
    ``n``); ``constraint`` covers documents.
    """

    clauses: list[tuple[int, ...]]
    match_sets: list[DocSet]
    objective: Coverage
    constraint: Coverage
    n: int
    n_docs: int

    def __post_init__(self):
        self._pos = {c: k for k, c in enumerate(self.clauses)}

    def __len__(self) -> int:
        return len(self.clauses)

    def index_of(self, clause: Sequence[int]) -> int:
        try:
            return self._pos[canonical_clause(clause)]
        except KeyError:
            raise KeyError(f"{tuple(clause)} is not a candidate clause") from None

    @property
    def singleton_cost(self) -> np.ndarray:
        return self.constraint.singletons()

    @property
    def singleton_gain(self) -> np.ndarray:
        return self.objective.singletons()

    def qmatch(self, k: int) -> list[int]:
        return self.objective.elements(k).tolist()

    def f(self, X: Iterable[int]) -> Fraction:
        return Fraction(self.objective.evaluate(X), self.n)

    def g(self, X: Iterable[int]) -> int:
        return self.constraint.evaluate(X)


def _subsets_upto(terms: tuple[int, ...], max_len: int):
    for r in range(1, min(max_len, len(terms)) + 1):
        yield from combinations(terms, r)


def precompute_stats(candidates: Iterable[Sequence[int]], index: InvertedIndex, log: QueryLog) -> ClauseStats:
    """Match sets and query-containment lists for every candidate clause."""
    clauses = sorted({canonical_clause(c) for c in candidates}, key=clause_sort_key)
    if not clauses:
        raise ValueError("no candidate clauses")
    pos = {c: k for k, c in enumerate(clauses)}
    max_len = max(len(c) for c in clauses)

    rows: list[list[int]] = [[] for _ in clauses]
    for qi, q in enumerate(log.queries):
        if len(q.terms) <= max_len:
            subsets = _subsets_upto(q.terms, max_len)
        else:
            # long queries: test each candidate instead of enumerating subsets
            qs = set(q.terms)
            subsets = (c for c in clauses if c[0] in qs and qs.issuperset(c))
        for s in subsets:
            k = pos.get(s)
            if k is not None:
                rows[k].append(qi)
    weights = np.array([q.weight for q in log.queries], dtype=np.int64)
    objective = Coverage.from_sets(rows, len(log.queries), weights)

    match_sets = [match(index, c) for c in clauses]
    constraint = Coverage.from_sets([m.ids for m in match_sets], index.n_docs)
    return ClauseStats(clauses, match_sets, objective, constraint, int(weights.sum()), index.n_docs)


class CoverageState:
    """Memoized ``f(X)``, ``g(X)`` for a growing clause selection."""

    def __init__(self, stats: ClauseStats):
        self.stats = stats
        self.f_cov = stats.objective.fresh()
        self.g_cov = stats.constraint.fresh()
        self.solution: list[tuple[int, ...]] = []
        self._members: set[int] = set()

    @property
    def covered_docs(self) -> DocSet:
        return DocSet.from_mask(self.g_cov.covered)

    @property
    def hit(self) -> np.ndarray:
        return self.f_cov.covered

    @property
    def covered_query_weight(self) -> int:
        return self.f_cov.value

    @property
    def f_value(self) -> Fraction:
        return Fraction(self.f_cov.value, self.stats.n)

    @property
    def g_value(self) -> int:
        return self.g_cov.value

    def __contains__(self, clause) -> bool:
        return self.stats.index_of(clause) in self._members


def f_gain(state: CoverageState, c: Sequence[int], stats: ClauseStats | None = None) -> Fraction:
    stats = stats or state.stats
    k = stats.index_of(c)
    return Fraction(state.f_cov.gain(k), stats.n)


def g_gain(state: CoverageState, c: Sequence[int], stats: ClauseStats | None = None) -> int:
    stats = stats or state.stats
    return state.g_cov.gain(stats.index_of(c))


def commit(state: CoverageState, c: Sequence[int], stats: ClauseStats | None = None) -> CoverageState:
    stats = stats or state.stats
    k = stats.index_of(c)
    if k in state._members:
        raise ValueError(f"clause {tuple(c)} already committed")
    state.f_cov.commit(k)
    state.g_cov.commit(k)
    state._members.add(k)
    state.solution.append(stats.clauses[k])
    return state
