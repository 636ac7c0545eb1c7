"""Tier-1 coverage measurement and synthetic workloads.

Coverage is the weighted fraction of logged queries a classifier routes to
Tier 1. A routed query whose match set is not inside Tier 1 counts as a
violation; clause classifiers cannot produce one by construction, and
query-selection classifiers cannot either, but both are checked.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

import numpy as np

from .corpus import Corpus, Document, QueryLog, Vocabulary
from .matchengine import ClauseIndex, DocSet, InvertedIndex, match
from .scsk import SOLVERS, oracle_exhaustive, solve
from .submodfn import Coverage

__all__ = [
    "CoverageReport",
    "measure_coverage",
    "evaluate",
    "SynthConfig",
    "SynthData",
    "generate_synthetic",
    "novel_fraction",
    "random_scsk_instance",
    "oracle_check",
]


def _as_classifier(classifier) -> Callable[[tuple[int, ...]], int]:
    if isinstance(classifier, ClauseIndex):
        return lambda terms: 1 if classifier.contains(terms) else 2
    if hasattr(classifier, "classify"):
        return classifier.classify
    return classifier


def measure_coverage(classifier, tier1_docs: DocSet, log: QueryLog, index: InvertedIndex) -> tuple[Fraction, int]:
    """``(covered weight / n, number of routed queries whose match set leaks out of Tier 1)``."""
    psi = _as_classifier(classifier)
    mask = tier1_docs.to_mask(index.n_docs)
    covered = 0
    violations = 0
    for q in log.queries:
        if psi(q.terms) == 1:
            covered += q.weight
            if not mask[match(index, q.terms).ids].all():
                violations += 1
    return Fraction(covered, log.n), violations


@dataclass
class CoverageReport:
    method: str
    budget: int
    tier1_docs: int
    train_coverage: Fraction
    test_coverage: Fraction | None = None
    violations: int = 0
    relative_test_coverage: float | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        extra = d.pop("extra")
        for key in ("train_coverage", "test_coverage"):
            value = d[key]
            if value is not None:
                d[key] = float(value)
                d[f"{key}_num"] = value.numerator
                d[f"{key}_den"] = value.denominator
        d.update(extra)
        return d

    def to_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")

    def to_keyvalue(self, path: str | Path) -> None:
        lines = [f"{k}={'' if v is None else v}" for k, v in sorted(self.to_dict().items())]
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def evaluate(classifier, tier1_docs: DocSet, train_log: QueryLog, test_log: QueryLog | None,
             index: InvertedIndex, *, budget: int | None = None, method: str = "",
             reference_test_coverage: Fraction | float | None = None) -> CoverageReport:
    """Training and held-out coverage of a classifier built from ``train_log``.

    ``violations`` sums both logs. ``relative_test_coverage`` is the test
    coverage divided by ``reference_test_coverage`` when one is given.
    """
    train_cov, v_train = measure_coverage(classifier, tier1_docs, train_log, index)
    test_cov, v_test = (None, 0)
    if test_log is not None:
        test_cov, v_test = measure_coverage(classifier, tier1_docs, test_log, index)
    rel = None
    if reference_test_coverage and test_cov is not None:
        rel = float(test_cov) / float(reference_test_coverage)
    return CoverageReport(
        method=method,
        budget=index.n_docs if budget is None else budget,
        tier1_docs=len(tier1_docs),
        train_coverage=train_cov,
        test_coverage=test_cov,
        violations=v_train + v_test,
        relative_test_coverage=rel,
    )


@dataclass(frozen=True)
class SynthConfig:
    """Synthetic corpus and query logs driven by latent search intents.

    Each intent has a small core (1-2 terms) and a pool of modifier terms.
    Documents and queries are both drawn from intents, so training and test
    logs share clause-level structure while many full test queries never
    occur in training. Term identities follow a Zipf law with exponent
    ``zipf_exponent``; intent popularity uses the same exponent.
    """

    n_docs: int = 50_000
    vocab_size: int = 20_000
    terms_per_doc: tuple[int, int] = (6, 14)
    zipf_exponent: float = 1.0
    n_train: int = 100_000
    n_test: int = 20_000
    query_len: tuple[int, int] = (1, 4)
    seed: int = 42
    n_intents: int = 3_000
    modifiers_per_intent: int = 12
    stray_term_rate: float = 0.1

    def __post_init__(self):
        for name in ("n_docs", "vocab_size", "n_train", "n_test", "n_intents", "modifiers_per_intent"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        lo, hi = self.terms_per_doc
        if not 1 <= lo <= hi:
            raise ValueError("terms_per_doc must be a range 1 <= lo <= hi")
        lo, hi = self.query_len
        if not 1 <= lo <= hi:
            raise ValueError("query_len must be a range 1 <= lo <= hi")
        if self.zipf_exponent < 0:
            raise ValueError("zipf_exponent must be >= 0")
        if self.vocab_size < self.modifiers_per_intent + 2:
            raise ValueError("vocab_size too small for the intent model")


@dataclass
class SynthData:
    corpus: Corpus
    train: QueryLog
    test: QueryLog
    metadata: dict


def _zipf(n: int, s: float) -> np.ndarray:
    p = np.arange(1, n + 1, dtype=np.float64) ** -s
    return p / p.sum()


class _Sampler:
    """Draws from a fixed discrete distribution via its cumulative sums."""

    def __init__(self, p: np.ndarray):
        self.cdf = np.cumsum(p)
        self.cdf[-1] = 1.0

    def draw(self, rng, size):
        return np.searchsorted(self.cdf, rng.random(size), side="right")


def _distinct(rng, k: int, sampler: _Sampler, exclude=()) -> list[int]:
    out: list[int] = []
    seen = set(exclude)
    while len(out) < k:
        for t in sampler.draw(rng, 2 * (k - len(out)) + 4).tolist():
            if t not in seen:
                seen.add(t)
                out.append(t)
                if len(out) == k:
                    break
    return out


def _queries(rng, cfg: SynthConfig, n: int, cores, modifiers, mod_logp, intents_s: _Sampler, terms_s: _Sampler):
    intents = intents_s.draw(rng, n)
    lengths = rng.integers(cfg.query_len[0], cfg.query_len[1] + 1, size=n)
    strays = rng.random(n) < cfg.stray_term_rate
    stray_terms = terms_s.draw(rng, n)
    # weighted sampling without replacement: top-k of log p + Gumbel noise
    mod_rank = np.argsort(-(mod_logp + rng.gumbel(size=(n, cfg.modifiers_per_intent))), axis=1)
    counts: dict[tuple[int, ...], int] = {}
    for i, L, stray, st, ranked in zip(intents.tolist(), lengths.tolist(), strays.tolist(),
                                       stray_terms.tolist(), mod_rank.tolist()):
        terms = set(cores[i])
        extra = max(0, L - len(terms))
        mods = modifiers[i]
        terms.update(mods[k] for k in ranked[:extra])
        if stray:
            terms.add(st)
        key = tuple(sorted(terms))
        counts[key] = counts.get(key, 0) + 1
    return QueryLog.from_term_sets(counts.items())


def generate_synthetic(cfg: SynthConfig = SynthConfig()) -> SynthData:
    """Deterministic for a given config (seeded numpy ``Generator``)."""
    ss = np.random.SeedSequence(cfg.seed)
    r_intent, r_docs, r_train, r_test = (np.random.default_rng(s) for s in ss.spawn(4))

    terms_s = _Sampler(_zipf(cfg.vocab_size, cfg.zipf_exponent))
    intents_s = _Sampler(_zipf(cfg.n_intents, cfg.zipf_exponent))
    mod_logp = np.log(_zipf(cfg.modifiers_per_intent, cfg.zipf_exponent))

    cores = []
    modifiers = []
    for _ in range(cfg.n_intents):
        core = _distinct(r_intent, 1 + int(r_intent.random() < 0.5), terms_s)
        cores.append(tuple(core))
        modifiers.append(_distinct(r_intent, cfg.modifiers_per_intent, terms_s, exclude=core))

    # documents: one intent each, about half its modifiers, then background terms
    doc_intents = intents_s.draw(r_docs, cfg.n_docs)
    lengths = r_docs.integers(cfg.terms_per_doc[0], cfg.terms_per_doc[1] + 1, size=cfg.n_docs)
    mod_mask = r_docs.random((cfg.n_docs, cfg.modifiers_per_intent)) < 0.5
    background = terms_s.draw(r_docs, (cfg.n_docs, cfg.terms_per_doc[1]))
    rows = []
    for d in range(cfg.n_docs):
        i = int(doc_intents[d])
        terms = set(cores[i])
        terms.update(m for m, keep in zip(modifiers[i], mod_mask[d].tolist()) if keep)
        for t in background[d].tolist():
            if len(terms) >= lengths[d]:
                break
            terms.add(t)
        rows.append(tuple(sorted(terms)))

    # vocabulary ids are assigned by first appearance, as the file loader would
    vocab = Vocabulary()
    names = [f"t{k}" for k in range(cfg.vocab_size)]
    remap: dict[int, int] = {}

    def ids(raw):
        out = []
        for t in raw:
            tid = remap.get(t)
            if tid is None:
                tid = remap[t] = vocab.intern(names[t])
            out.append(tid)
        return tuple(sorted(out))

    docs = [Document(d, ids(r)) for d, r in enumerate(rows)]
    corpus = Corpus(docs, vocab)

    train_raw = _queries(r_train, cfg, cfg.n_train, cores, modifiers, mod_logp, intents_s, terms_s)
    test_raw = _queries(r_test, cfg, cfg.n_test, cores, modifiers, mod_logp, intents_s, terms_s)
    train = QueryLog.from_term_sets((ids(q.terms), q.weight) for q in train_raw)
    test = QueryLog.from_term_sets((ids(q.terms), q.weight) for q in test_raw)

    meta = {
        "seed": cfg.seed,
        "n_docs": cfg.n_docs,
        "vocab_used": len(vocab),
        "train_distinct": len(train),
        "test_distinct": len(test),
        "novel_test_fraction": float(novel_fraction(train, test)),
        "novel_test_distinct_fraction": sum(1 for q in test if train.index_of(q.terms) is None) / len(test),
    }
    return SynthData(corpus, train, test, meta)


def novel_fraction(train: QueryLog, test: QueryLog) -> Fraction:
    """Weighted fraction of test queries whose exact term set never occurs in training."""
    novel = sum(q.weight for q in test if train.index_of(q.terms) is None)
    return Fraction(novel, test.n)


def random_scsk_instance(rng: np.random.Generator, n_candidates: int, n_docs: int | None = None,
                         n_queries: int | None = None, max_weight: int = 5, density: float = 0.3):
    """Random ``(f, g, budget)``: weighted query coverage over document coverage.

    Each candidate covers a random subset of queries and of documents, with
    per-candidate densities drawn up to ``density``.
    """
    n_docs = n_docs or int(rng.integers(5, 60))
    n_queries = n_queries or int(rng.integers(5, 60))
    f_sets = [np.flatnonzero(rng.random(n_queries) < rng.random() * density) for _ in range(n_candidates)]
    g_sets = [np.flatnonzero(rng.random(n_docs) < rng.random() * density) for _ in range(n_candidates)]
    weights = rng.integers(1, max_weight + 1, size=n_queries)
    f = Coverage.from_sets(f_sets, n_queries, weights)
    g = Coverage.from_sets(g_sets, n_docs)
    return f, g, int(rng.integers(1, n_docs + 1))


def oracle_check(n_instances: int = 100, max_candidates: int = 12, seed: int = 0,
                 algorithms=None) -> dict[str, dict]:
    """Run solvers against the exhaustive optimum on random tiny instances.

    Per algorithm: ``feasible`` and ``bounded`` (f <= optimum) counts,
    ``optimal`` count and the mean ratio f / optimum (instances with
    optimum 0 count as ratio 1).
    """
    import warnings

    algorithms = list(SOLVERS) if algorithms is None else list(algorithms)
    rng = np.random.default_rng(seed)
    table = {a: {"instances": 0, "feasible": 0, "bounded": 0, "optimal": 0, "ratio_sum": 0.0}
             for a in algorithms}
    for _ in range(n_instances):
        f, g, budget = random_scsk_instance(rng, int(rng.integers(1, max_candidates + 1)))
        _, opt = oracle_exhaustive(f, g, budget)
        for a in algorithms:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                X, _ = solve(a, f, g, budget)
            val = f.evaluate(X)
            row = table[a]
            row["instances"] += 1
            row["feasible"] += g.evaluate(X) <= budget
            row["bounded"] += val <= opt
            row["optimal"] += val == opt
            row["ratio_sum"] += 1.0 if opt == 0 else val / opt
    for row in table.values():
        row["mean_ratio"] = row.pop("ratio_sum") / max(row["instances"], 1)
    return table
