"""End-to-end helpers: mine candidates, solve, build the Tier-1 classifier."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .clauseminer import MinerConfig, mine_candidates
from .corpus import QueryLog
from .matchengine import ClauseIndex, DocSet, InvertedIndex
from .scsk import SolutionPath, solve
from .submodfn import ClauseStats, precompute_stats

__all__ = ["ClauseSolution", "select_clauses"]


@dataclass
class ClauseSolution:
    stats: ClauseStats
    selected: list[int]
    path: SolutionPath
    classifier: ClauseIndex
    tier1_docs: DocSet

    @property
    def clauses(self) -> list[tuple[int, ...]]:
        return [self.stats.clauses[k] for k in self.selected]

    @property
    def train_objective(self) -> Fraction:
        return self.stats.f(self.selected)


def select_clauses(index: InvertedIndex, train: QueryLog, budget: int, *,
                   min_support=Fraction(1, 10_000), max_clause_len: int = 3,
                   max_candidates: int | None = None, algorithm: str = "optpes",
                   threads: int = 1, stats: ClauseStats | None = None) -> ClauseSolution:
    """Mine frequent clauses from ``train`` and pick a Tier-1 clause set under ``budget``."""
    if stats is None:
        cands = mine_candidates(train, MinerConfig(min_support, max_clause_len, max_candidates))
        stats = precompute_stats(cands, index, train)
    X, path = solve(algorithm, stats.objective, stats.constraint, budget, threads=threads)
    ci = ClauseIndex(stats.clauses[k] for k in X)
    tier1 = DocSet.from_mask(_covered_mask(stats, X))
    return ClauseSolution(stats, X, path, ci, tier1)


def _covered_mask(stats: ClauseStats, X):
    g = stats.constraint.fresh()
    for j in X:
        g.commit(j)
    return g.covered
