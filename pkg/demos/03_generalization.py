"""
Held-out coverage: clauses versus whole-query selection
=======================================================

Query-selection tiers only recognise queries they saw in training, so a
new query always falls through to Tier 2. Clauses are shared between old
and new queries, which lets a clause tier serve unseen traffic.
"""
from fractions import Fraction

from tierforge.baselines import BASELINES, query_match_sets
from tierforge.evaluation import SynthConfig, evaluate, generate_synthetic, novel_fraction
from tierforge.matchengine import build_index
from tierforge.pipeline import select_clauses

data = generate_synthetic(SynthConfig(n_docs=10_000, vocab_size=5_000, n_train=20_000, n_test=5_000,
                                      n_intents=800, seed=3))
index = build_index(data.corpus)
ms = query_match_sets(data.train, index)
print(f"novel test traffic: {float(novel_fraction(data.train, data.test)):.1%}")

print(f"\n{'budget':>7} {'method':<11}{'train':>8}{'test':>8}")
for share in (0.1, 0.25, 0.5):
    B = int(share * data.corpus.n_docs)
    sol = select_clauses(index, data.train, B, min_support=Fraction(1, 5000))
    rep = evaluate(sol.classifier, sol.tier1_docs, data.train, data.test, index, budget=B)
    print(f"{B:>7} {'clauses':<11}{float(rep.train_coverage):>8.3f}{float(rep.test_coverage):>8.3f}")
    for name, fn in BASELINES.items():
        sel = fn(data.corpus, data.train, index, B, ms)
        r = evaluate(sel, sel.tier1_docs, data.train, data.test, index, budget=B)
        print(f"{'':>7} {name:<11}{float(r.train_coverage):>8.3f}{float(r.test_coverage):>8.3f}")
