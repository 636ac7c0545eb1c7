import numpy as np
import pytest

from tierforge.baselines import (
    BASELINES,
    QuerySelection,
    classify_by_query_selection,
    flow_greedy_baseline,
    flowmax_baseline,
    popularity_baseline,
    query_match_sets,
    read_selection,
    write_selection,
)
from tierforge.corpus import QueryLog
from tierforge.evaluation import SynthConfig, generate_synthetic, measure_coverage
from tierforge.matchengine import DocSet, build_index, match


def brute_scores(corpus, log, index, combine):
    scores = [0] * corpus.n_docs
    for q in log:
        for d in match(index, q.terms).ids.tolist():
            scores[d] = combine(scores[d], q.weight)
    return scores


def brute_top(scores, B):
    return set(sorted(range(len(scores)), key=lambda d: (-scores[d], d))[:B])


@pytest.fixture(scope="module")
def small_synth():
    data = generate_synthetic(SynthConfig(n_docs=800, vocab_size=600, n_train=2000, n_test=500,
                                          n_intents=80, seed=3))
    return data, build_index(data.corpus)


def test_popularity_toy(shirts, shirt_index, toy_log, ids):
    sel = popularity_baseline(shirts, toy_log, shirt_index, 3)
    assert sel.tier1_docs == {0, 2, 4}
    assert sel.queries == [ids("red shirt")]


def test_flowmax_toy(shirts, shirt_index, toy_log, ids):
    sel = flowmax_baseline(shirts, toy_log, shirt_index, 3)
    # heaviest matching query per doc: D1 3, D3 3, D4 1, D5 2, D6 2
    assert sel.tier1_docs == {0, 2, 4}
    assert sel.queries == [ids("red shirt")]


def test_flowgreedy_toy(shirts, shirt_index, toy_log, ids):
    sel = flow_greedy_baseline(shirts, toy_log, shirt_index, 3)
    # "red shirt" first (3 per 2 docs); "blue pants" then needs 2 docs with 1 left,
    # but "red" only adds D4 and still fits
    assert sel.queries == [ids("red"), ids("red shirt")]
    assert sel.tier1_docs == {0, 2, 3}


def test_flowgreedy_toy_by_hand(shirts, shirt_index, toy_log):
    """Replay the ratio rule with plain sets."""
    ms = {q.terms: set(match(shirt_index, q.terms).ids.tolist()) for q in toy_log}
    weight = {q.terms: q.weight for q in toy_log}
    chosen, docs = [], set()
    while True:
        best = None
        for q in sorted(ms, key=lambda t: (len(t), t)):
            if q in chosen or len(docs | ms[q]) > 3:
                continue
            ratio = weight[q] / max(len(ms[q] - docs), 1e-9)
            if best is None or ratio > best[0]:
                best = (ratio, q)
        if best is None:
            break
        chosen.append(best[1])
        docs |= ms[best[1]]
    sel = flow_greedy_baseline(shirts, toy_log, shirt_index, 3)
    assert set(sel.queries) == set(chosen) and set(sel.tier1_docs.ids.tolist()) == docs


@pytest.mark.parametrize("algorithm", ["greedy", "lazy", "incremental", "optpes"])
def test_flowgreedy_solver_choice_irrelevant(small_synth, algorithm):
    data, index = small_synth
    ref = flow_greedy_baseline(data.corpus, data.train, index, 300, algorithm="greedy")
    sel = flow_greedy_baseline(data.corpus, data.train, index, 300, algorithm=algorithm)
    assert sel.path.clauses == ref.path.clauses


def test_full_budget_selects_all_matching(shirts, shirt_index, toy_log):
    for fn in (popularity_baseline, flowmax_baseline):
        sel = fn(shirts, toy_log, shirt_index, shirts.n_docs)
        assert len(sel) == 3


def test_zero_budget_rejected(shirts, shirt_index, toy_log):
    for fn in BASELINES.values():
        with pytest.raises(ValueError):
            fn(shirts, toy_log, shirt_index, 0)


def test_single_query_heuristics_agree(shirts, shirt_index):
    log = QueryLog.from_texts([("blue pants", 4)], shirts.vocab)
    a = popularity_baseline(shirts, log, shirt_index, 2)
    b = flowmax_baseline(shirts, log, shirt_index, 2)
    assert a.queries == b.queries and a.tier1_docs == b.tier1_docs


def test_unmatched_document_ranked_last(shirts, shirt_index):
    log = QueryLog.from_texts(["red", "pants"], shirts.vocab)
    sel = flowmax_baseline(shirts, log, shirt_index, 5)
    assert 1 not in sel.tier1_docs  # D2 matches neither query


def test_empty_match_query_is_free_for_greedy_only(shirts, shirt_index):
    log = QueryLog.from_texts([("green", 5), ("red", 1)], shirts.vocab)
    green = shirts.vocab.ids_of(["green"])
    assert green in flow_greedy_baseline(shirts, log, shirt_index, 1)
    assert green not in popularity_baseline(shirts, log, shirt_index, 3)


def test_disjoint_unit_queries_knapsack_by_weight(shirts, shirt_index):
    # each of these queries matches exactly one document
    log = QueryLog.from_texts([("red shirt striped", 1), ("blue shirt striped", 4), ("blue pants striped", 2)],
                              shirts.vocab)
    sel = flow_greedy_baseline(shirts, log, shirt_index, 2)
    assert set(sel.queries) == {shirts.vocab.ids_of(t.split()) for t in ("blue shirt striped", "blue pants striped")}


@pytest.mark.parametrize("name", sorted(BASELINES))
@pytest.mark.parametrize("budget", [1, 50, 400, 800])
def test_budget_and_containment(small_synth, name, budget):
    data, index = small_synth
    sel = BASELINES[name](data.corpus, data.train, index, budget)
    assert len(sel.tier1_docs) <= budget
    mask = sel.tier1_docs.to_mask(index.n_docs)
    for q in sel.queries:
        assert mask[match(index, q).ids].all()
    _, violations = measure_coverage(sel, sel.tier1_docs, data.test, index)
    assert violations == 0


@pytest.mark.parametrize("combine,fn", [(lambda a, w: a + w, popularity_baseline),
                                        (max, flowmax_baseline)])
def test_heuristics_match_brute_force(small_synth, combine, fn):
    data, index = small_synth
    scores = brute_scores(data.corpus, data.train, index, combine)
    for B in (10, 200):
        sel = fn(data.corpus, data.train, index, B)
        top = brute_top(scores, B)
        assert set(sel.tier1_docs.ids.tolist()) == top
        want = {q.terms for q in data.train if len(match(index, q.terms)) and set(match(index, q.terms).ids.tolist()) <= top}
        assert set(sel.queries) == want


def test_flowgreedy_trains_at_least_as_well_as_heuristics(small_synth):
    data, index = small_synth
    ms = query_match_sets(data.train, index)
    for B in (50, 200, 400):
        cov = {}
        for name, fn in BASELINES.items():
            sel = fn(data.corpus, data.train, index, B, ms)
            cov[name] = measure_coverage(sel, sel.tier1_docs, data.train, index)[0]
        assert cov["flowgreedy"] >= cov["popularity"]
        assert cov["flowgreedy"] >= cov["flowmax"]


def test_novel_queries_go_to_tier2(small_synth):
    data, index = small_synth
    seen = {q.terms for q in data.train}
    for fn in BASELINES.values():
        sel = fn(data.corpus, data.train, index, 400)
        for q in data.test:
            if q.terms not in seen:
                assert sel.classify(q) == 2


def test_classify_rules(shirts, toy_log, ids):
    sel = QuerySelection([ids("red shirt")], DocSet([0, 2]))
    assert classify_by_query_selection(sel, ids("red shirt")) == 1
    assert sel(ids("shirt red")) == 1
    assert sel(ids("red")) == 2  # seen in training, not selected
    assert sel(ids("red shirt striped")) == 2  # superset is not an exact match


def test_selection_file_round_trip(tmp_path, shirts, shirt_index, toy_log):
    sel = popularity_baseline(shirts, toy_log, shirt_index, 6)
    path = tmp_path / "sel.txt"
    write_selection(sel, shirts.vocab, path)
    assert path.read_text().splitlines()[0] == "#type=query"
    back = read_selection(path, shirts.vocab, shirt_index)
    assert back.queries == sel.queries


def test_read_selection_rejects_clause_file(tmp_path, shirts, shirt_index):
    path = tmp_path / "clauses.txt"
    path.write_text("red\n")
    with pytest.raises(ValueError):
        read_selection(path, shirts.vocab, shirt_index)
