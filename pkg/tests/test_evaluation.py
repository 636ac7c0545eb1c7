import json
import random
from fractions import Fraction

import numpy as np
import pytest

from tierforge.corpus import QueryLog
from tierforge.evaluation import (
    CoverageReport,
    SynthConfig,
    evaluate,
    generate_synthetic,
    measure_coverage,
    novel_fraction,
)
from tierforge.matchengine import ClauseIndex, DocSet, build_index

SMALL = SynthConfig(n_docs=500, vocab_size=400, n_train=1500, n_test=600, n_intents=60, seed=9)


@pytest.fixture
def clause_setup(shirts, shirt_index, ids):
    ci = ClauseIndex([ids("red"), ids("blue shirt")])
    return ci, ci.tier1_documents(shirt_index)


def test_worked_example(shirts, shirt_index, toy_log, clause_setup):
    ci, tier1 = clause_setup
    test = QueryLog.from_texts(["red pants", "blue pants"], shirts.vocab)
    rep = evaluate(ci, tier1, toy_log, test, shirt_index, budget=4, method="clause")
    assert tier1 == {0, 1, 2, 3}
    assert rep.test_coverage == Fraction(1, 2)
    assert rep.train_coverage == Fraction(4, 6)
    assert rep.violations == 0 and rep.tier1_docs == 4


def test_empty_selection_covers_nothing(shirt_index, toy_log):
    ci = ClauseIndex([])
    cov, v = measure_coverage(ci, ci.tier1_documents(shirt_index), toy_log, shirt_index)
    assert cov == 0 and v == 0


def test_always_tier2(shirt_index, toy_log):
    cov, v = measure_coverage(lambda terms: 2, DocSet([]), toy_log, shirt_index)
    assert cov == 0 and v == 0


def test_violations_counted(shirt_index, toy_log, ids):
    # a classifier that routes everything to Tier 1 with a one-document Tier 1
    cov, v = measure_coverage(lambda terms: 1, DocSet([0]), toy_log, shirt_index)
    assert cov == 1 and v == 3


def test_relative_column(shirts, shirt_index, toy_log, clause_setup):
    ci, tier1 = clause_setup
    rep = evaluate(ci, tier1, toy_log, toy_log, shirt_index, reference_test_coverage=Fraction(1, 3))
    assert rep.relative_test_coverage == pytest.approx(2.0)


def test_report_serialization(tmp_path, shirts, shirt_index, toy_log, clause_setup):
    ci, tier1 = clause_setup
    rep = evaluate(ci, tier1, toy_log, None, shirt_index, budget=4, method="clause")
    rep.extra["algorithm"] = "optpes"
    rep.to_json(tmp_path / "r.json")
    d = json.loads((tmp_path / "r.json").read_text())
    assert d["train_coverage_num"] == 2 and d["train_coverage_den"] == 3
    assert d["test_coverage"] is None and d["algorithm"] == "optpes"
    rep.to_keyvalue(tmp_path / "r.txt")
    lines = (tmp_path / "r.txt").read_text().splitlines()
    assert "violations=0" in lines and "method=clause" in lines


def test_order_independent(shirt_index, toy_log, clause_setup):
    ci, tier1 = clause_setup
    base = measure_coverage(ci, tier1, toy_log, shirt_index)
    qs = list(toy_log.queries)
    rng = random.Random(1)
    for _ in range(5):
        rng.shuffle(qs)
        shuffled = QueryLog.from_term_sets((q.terms, q.weight) for q in qs)
        assert measure_coverage(ci, tier1, shuffled, shirt_index) == base


def test_synthetic_deterministic():
    a, b = generate_synthetic(SMALL), generate_synthetic(SMALL)
    assert [d.terms for d in a.corpus] == [d.terms for d in b.corpus]
    assert a.train.queries == b.train.queries and a.test.queries == b.test.queries
    assert a.metadata == b.metadata


def test_synthetic_seed_changes_output():
    a = generate_synthetic(SMALL)
    b = generate_synthetic(SynthConfig(**{**SMALL.__dict__, "seed": 10}))
    assert [d.terms for d in a.corpus] != [d.terms for d in b.corpus]


def test_synthetic_shapes():
    data = generate_synthetic(SMALL)
    assert data.corpus.n_docs == SMALL.n_docs
    assert data.train.n == SMALL.n_train and data.test.n == SMALL.n_test
    lo, hi = SMALL.terms_per_doc
    assert all(1 <= len(d.terms) <= hi for d in data.corpus)
    assert all(len(q.terms) <= SMALL.query_len[1] + 1 for q in data.train)


def test_long_queries_are_mostly_novel():
    cfg = SynthConfig(n_docs=2000, vocab_size=3000, n_train=5000, n_test=5000, query_len=(3, 5),
                      n_intents=300, seed=4)
    data = generate_synthetic(cfg)
    assert data.metadata["novel_test_fraction"] > 0.3
    assert Fraction(data.metadata["novel_test_fraction"]).limit_denominator(cfg.n_test) == \
        novel_fraction(data.train, data.test)


def test_zipf_zero_is_uniform():
    cfg = SynthConfig(n_docs=4000, vocab_size=50, terms_per_doc=(8, 8), n_train=10, n_test=10,
                      n_intents=2000, modifiers_per_intent=4, zipf_exponent=0.0, seed=2)
    data = generate_synthetic(cfg)
    counts = np.bincount(np.concatenate([np.asarray(d.terms) for d in data.corpus]), minlength=50)
    # with many intents the per-term counts sit close to the mean
    assert counts.min() > 0.8 * counts.mean() and counts.max() < 1.2 * counts.mean()


def test_zipf_skews_usage():
    cfg = SynthConfig(n_docs=4000, vocab_size=500, n_train=10, n_test=10, n_intents=10, seed=2)
    data = generate_synthetic(cfg)
    counts = np.bincount(np.concatenate([np.asarray(d.terms) for d in data.corpus]))
    assert counts.max() > 10 * np.median(counts[counts > 0])


@pytest.mark.parametrize("field,value", [("n_docs", 0), ("terms_per_doc", (3, 2)), ("query_len", (0, 2)),
                                         ("zipf_exponent", -1.0), ("vocab_size", 3)])
def test_config_validation(field, value):
    with pytest.raises(ValueError):
        SynthConfig(**{field: value})


def test_clause_method_never_violates():
    from tierforge.pipeline import select_clauses
    data = generate_synthetic(SMALL)
    index = build_index(data.corpus)
    sol = select_clauses(index, data.train, 200, min_support=Fraction(1, 500))
    rep = evaluate(sol.classifier, sol.tier1_docs, data.train, data.test, index, budget=200)
    assert rep.violations == 0 and rep.tier1_docs <= 200
    assert rep.train_coverage == sol.train_objective
