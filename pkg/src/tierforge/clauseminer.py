"""Frequent clause mining over a weighted query log.

The candidate ground set is every clause whose weighted support (the total
count of logged queries containing it) reaches ``ceil(min_support * n)``.
Mining uses FP-growth over the deduplicated queries, with query counts as
transaction weights, and stops growing patterns at ``max_clause_len``.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .corpus import QueryLog

__all__ = ["MinerConfig", "mine_candidates", "mine_supports", "brute_force_supports", "canonical_order"]


@dataclass(frozen=True)
class MinerConfig:
    min_support: Fraction | float = Fraction(1, 100)
    max_clause_len: int = 3
    max_candidates: int | None = None

    def __post_init__(self):
        if not (0 < self.min_support <= 1):
            raise ValueError(f"min_support must be in (0, 1], got {self.min_support}")
        if self.max_clause_len < 1:
            raise ValueError("max_clause_len must be >= 1")
        if self.max_candidates is not None and self.max_candidates < 0:
            raise ValueError("max_candidates must be non-negative")

    def min_count(self, n: int) -> int:
        # via str so 0.001 means 1/1000, not its binary float neighbour
        return max(1, math.ceil(Fraction(str(self.min_support)) * n))


class _Node:
    __slots__ = ("item", "count", "parent", "children", "link")

    def __init__(self, item, parent):
        self.item = item
        self.count = 0
        self.parent = parent
        self.children = {}
        self.link = None


def _build_tree(transactions, min_count):
    """Returns (header: item -> first node, item supports, items in ascending support order)."""
    support: Counter = Counter()
    for items, w in transactions:
        for it in items:
            support[it] += w
    frequent = {it: s for it, s in support.items() if s >= min_count}
    if not frequent:
        return None, frequent, []
    # insertion order: support desc, item asc
    rank = {it: r for r, it in enumerate(sorted(frequent, key=lambda it: (-frequent[it], it)))}
    root = _Node(None, None)
    heads: dict = {}
    tails: dict = {}
    for items, w in transactions:
        path = sorted((it for it in items if it in rank), key=rank.__getitem__)
        node = root
        for it in path:
            child = node.children.get(it)
            if child is None:
                child = _Node(it, node)
                node.children[it] = child
                if it in tails:
                    tails[it].link = child
                else:
                    heads[it] = child
                tails[it] = child
            child.count += w
            node = child
    order = sorted(frequent, key=lambda it: (frequent[it], -rank[it]))
    return heads, frequent, order


def _fpgrowth(transactions, min_count, max_len, suffix, out):
    heads, support, order = _build_tree(transactions, min_count)
    if heads is None:
        return
    for it in order:
        pattern = (it,) + suffix
        out[tuple(sorted(pattern))] = support[it]
        if len(pattern) >= max_len:
            continue
        base = []
        node = heads[it]
        while node is not None:
            prefix = []
            p = node.parent
            while p is not None and p.item is not None:
                prefix.append(p.item)
                p = p.parent
            if prefix:
                base.append((prefix, node.count))
            node = node.link
        if base:
            _fpgrowth(base, min_count, max_len, pattern, out)


def mine_supports(log: QueryLog, min_count: int, max_len: int) -> dict[tuple[int, ...], int]:
    """Every clause of length <= ``max_len`` with weighted support >= ``min_count``."""
    out: dict[tuple[int, ...], int] = {}
    _fpgrowth([(q.terms, q.weight) for q in log.queries], min_count, max_len, (), out)
    return out


def brute_force_supports(log: QueryLog, min_count: int, max_len: int) -> dict[tuple[int, ...], int]:
    """Reference miner: enumerate every short subset of every query."""
    counts: Counter = Counter()
    for q in log.queries:
        for r in range(1, min(max_len, len(q.terms)) + 1):
            for c in combinations(q.terms, r):
                counts[c] += q.weight
    return {c: s for c, s in counts.items() if s >= min_count}


def canonical_order(supports: dict[tuple[int, ...], int]) -> list[tuple[int, ...]]:
    return sorted(supports, key=lambda c: (-supports[c], len(c), c))


def mine_candidates(log: QueryLog, cfg: MinerConfig = MinerConfig(), *, with_support: bool = False):
    """Frequent clauses in canonical order (support desc, length asc, lexicographic).

    With ``with_support=True`` returns ``(clauses, supports)``.
    """
    if len(log) == 0:
        raise ValueError("empty query log")
    supports = mine_supports(log, cfg.min_count(log.n), cfg.max_clause_len)
    clauses = canonical_order(supports)
    if cfg.max_candidates is not None:
        clauses = clauses[: cfg.max_candidates]
    if with_support:
        return clauses, {c: supports[c] for c in clauses}
    return clauses
