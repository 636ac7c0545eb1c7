"""Two-tier index construction by clause selection.

A Tier-1 index is defined by a set of term clauses: a document is indexed
in Tier 1 when it contains a selected clause, and a query is served by
Tier 1 when it contains one. Choosing the clauses that cover the most
query traffic while keeping Tier 1 under a document budget is a monotone
submodular maximization with a submodular budget; :mod:`tierforge.scsk`
holds the solvers.

Modules
-------
corpus       -- corpus / query-log loading and term interning
matchengine  -- inverted index, match sets, clause classifiers
submodfn     -- query-coverage objective and document-coverage constraint
clauseminer  -- weighted FP-growth candidate mining
scsk         -- greedy, lazy, optimistic-pessimistic, agnostic, ISK, exhaustive oracle
baselines    -- query-selection tiering baselines
evaluation   -- coverage reports and the synthetic workload generator
pipeline     -- end-to-end helpers used by the CLI and the demos
cli          -- the ``tierforge`` command
"""
from .corpus import Corpus, DataError, Document, Query, QueryLog, Vocabulary, load_corpus, load_query_log
from .matchengine import ClauseIndex, DocSet, build_index, classify_document, classify_query, match
from .submodfn import ClauseStats, Coverage, CoverageState, precompute_stats
from .clauseminer import MinerConfig, mine_candidates
from .scsk import (
    SolutionPath,
    constraint_agnostic_greedy,
    greedy,
    incremental_greedy,
    isk,
    lazy_greedy,
    optpes_greedy,
    oracle_exhaustive,
    resolve_budget,
    solve,
)

__version__ = "0.1.0"
