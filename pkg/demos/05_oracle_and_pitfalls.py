"""
Small instances against exhaustive search
=========================================

On instances with a dozen candidates every subset can be checked. We use
that to see how close each solver gets, and to show why ranking by gain
alone (ignoring cost) can waste the budget.
"""
from tierforge.evaluation import oracle_check
from tierforge.scsk import constraint_agnostic_greedy, greedy, oracle_exhaustive
from tierforge.submodfn import Coverage

table = oracle_check(n_instances=200, max_candidates=12, seed=0)
print(f"{'algorithm':<12}{'optimal':>9}{'mean f/opt':>12}")
for name, row in table.items():
    print(f"{name:<12}{row['optimal']:>5}/{row['instances']:<3}{row['mean_ratio']:>12.4f}")

# %%
# One expensive clause with the biggest gain, two cheap ones with a bit less.
f = Coverage.from_sets([range(0, 10), range(10, 16), range(16, 22)], 22)
g = Coverage.from_sets([range(0, 10), [10], [11]], 12)
budget = 10
for name, solver in (("cost-blind", constraint_agnostic_greedy), ("ratio greedy", greedy)):
    X, _ = solver(f, g, budget)
    print(f"{name:<13} picks {X}: f={f.evaluate(X)} g={g.evaluate(X)}")
print("exhaustive   ", oracle_exhaustive(f, g, budget))
