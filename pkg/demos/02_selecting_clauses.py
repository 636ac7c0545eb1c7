"""
Choosing clauses under a document budget
========================================

We generate a small synthetic workload, mine frequent clauses from the
training log and run each solver at the same budget. The objective is the
weighted share of training queries that contain a selected clause; the
budget caps how many documents Tier 1 may hold.
"""
from fractions import Fraction

from tierforge.clauseminer import MinerConfig, mine_candidates
from tierforge.evaluation import SynthConfig, generate_synthetic
from tierforge.matchengine import build_index
from tierforge.scsk import solve
from tierforge.submodfn import precompute_stats

cfg = SynthConfig(n_docs=5_000, vocab_size=3_000, n_train=10_000, n_test=2_000, n_intents=400, seed=1)
data = generate_synthetic(cfg)
index = build_index(data.corpus)
print(data.metadata)

clauses = mine_candidates(data.train, MinerConfig(Fraction(1, 2000), max_clause_len=3))
stats = precompute_stats(clauses, index, data.train)
print(f"{len(clauses)} candidate clauses, e.g.",
      [" ".join(data.corpus.vocab.terms_of(c)) for c in clauses[:5]])

# %%
# Every solver at B = |D| / 4. ``f`` is a fraction of n training queries.
budget = cfg.n_docs // 4
f, g = stats.objective, stats.constraint
print(f"\n{'algorithm':<10}{'clauses':>8}{'f(X)':>9}{'g(X)':>7}{'records':>9}")
for name in ("greedy", "lazy", "optpes", "agnostic", "isk1", "isk2"):
    X, path = solve(name, f, g, budget)
    print(f"{name:<10}{len(X):>8}{float(stats.f(X)):>9.4f}{stats.g(X):>7}{len(path):>9}")

# %%
# Greedy records a point per added clause; the iterated knapsack records
# one point per outer round. Both paths can be dumped for plotting.
X, path = solve("greedy", f, g, budget)
labels = [" ".join(data.corpus.vocab.terms_of(c)) for c in stats.clauses]
path.to_csv("greedy_path.csv", labels)
for r in list(path)[:8]:
    print(r.iter, labels[r.clause], f"{r.f_num}/{r.f_den}", r.g)
