"""Solvers for monotone submodular maximization under a submodular budget.

Every solver takes two :class:`~tierforge.submodfn.Coverage` oracles, the
objective ``f`` and the cost ``g``, and an integer budget ``B``. Candidates
are the oracle rows ``0..m-1``; row order is the tie-break order (callers
build oracles in canonical clause order), so the three ratio greedies pick
identical sequences.

Ratio ordering: ``f/g`` compared exactly; a candidate with positive
``f``-gain and zero ``g``-gain has infinite ratio and such candidates are
ordered by ``f``-gain. Candidates with zero ``f``-gain are never selected.
"""
from __future__ import annotations

import csv
import heapq
import math
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .submodfn import Coverage

__all__ = [
    "resolve_budget",
    "PathRecord",
    "SolutionPath",
    "ratio_gt",
    "greedy",
    "lazy_greedy",
    "incremental_greedy",
    "optpes_greedy",
    "constraint_agnostic_greedy",
    "ModularBound",
    "modular_upper_bound",
    "knapsack_greedy",
    "isk",
    "oracle_exhaustive",
    "SOLVERS",
    "solve",
]

ORACLE_MAX_CANDIDATES = 20


def resolve_budget(budget: int | float | str, n_docs: int) -> int:
    """Turn ``120``, ``0.5`` or ``"0.5x"`` into a document count in ``[1, n_docs]``.

    Integers are absolute counts; floats and the ``x`` suffix are fractions
    of the corpus size, rounded up. Values above ``n_docs`` are clamped with
    a warning.
    """
    if isinstance(budget, str):
        text = budget.strip().lower()
        if text.endswith("x"):
            resolved = math.ceil(float(text[:-1]) * n_docs)
        else:
            resolved = int(text)
    elif isinstance(budget, float):
        resolved = math.ceil(budget * n_docs)
    else:
        resolved = int(budget)
    if resolved < 1:
        raise ValueError(f"budget must be at least 1 document, got {budget!r}")
    if resolved > n_docs:
        warnings.warn(f"budget {budget!r} exceeds corpus size {n_docs}; clamped", stacklevel=2)
        resolved = n_docs
    return resolved


@dataclass(frozen=True)
class PathRecord:
    iter: int
    clause: int | None
    f_num: int
    f_den: int
    g: int
    wall_ns: int
    evals: int


@dataclass
class SolutionPath:
    records: list[PathRecord] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def clauses(self) -> list[int]:
        return [r.clause for r in self.records if r.clause is not None]

    def to_csv(self, path, labels: Callable[[int], str] | Sequence[str] | None = None) -> None:
        """Write ``iter,clause,f_num,f_den,g,wall_ns,evals``; ``labels`` renders clause ids."""
        if labels is None:
            label = str
        elif callable(labels):
            label = labels
        else:
            label = labels.__getitem__
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["iter", "clause", "f_num", "f_den", "g", "wall_ns", "evals"])
            for r in self.records:
                w.writerow([r.iter, "" if r.clause is None else label(r.clause),
                            r.f_num, r.f_den, r.g, r.wall_ns, r.evals])


def ratio_gt(f1: int, g1: int, f2: int, g2: int) -> bool:
    """Exact ``f1/g1 > f2/g2`` with the zero-cost convention."""
    inf1 = g1 == 0 and f1 > 0
    inf2 = g2 == 0 and f2 > 0
    if inf1 or inf2:
        if inf1 and inf2:
            return f1 > f2
        return inf1
    if g1 == 0 or g2 == 0:
        # 0/0 is treated as ratio 0
        return g1 != 0 and f1 > 0
    return f1 * g2 > f2 * g1


def _check_exact_keys(f: Coverage, g: Coverage) -> None:
    # Distinct ratios p/q, r/s with p <= F and q, s <= G differ by a relative
    # amount >= 1/(F*G); correctly rounded division keeps them apart below 2**50.
    if f.total * max(g.total, 1) >= 2**50:
        raise OverflowError("instance too large for exact float ratio keys")


def _ratio_keys(fv: np.ndarray, gv: np.ndarray, f_total: int) -> np.ndarray:
    """Order-preserving float image of the ratio order."""
    fv = np.asarray(fv, dtype=np.float64)
    gv = np.asarray(gv, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        keys = np.where(gv > 0, fv / np.where(gv > 0, gv, 1.0), f_total + 1.0 + fv)
    keys[fv <= 0] = 0.0
    return keys


def _ratio_key(fv: int, gv: int, f_total: int) -> float:
    if fv <= 0:
        return 0.0
    if gv == 0:
        return f_total + 1.0 + fv
    return fv / gv


def _candidate_mask(n: int, candidates) -> np.ndarray:
    if candidates is None:
        return np.ones(n, dtype=bool)
    mask = np.zeros(n, dtype=bool)
    mask[np.asarray(list(candidates), dtype=np.int64)] = True
    return mask


class _Recorder:
    def __init__(self, f: Coverage, g: Coverage):
        self.f, self.g = f, g
        self.start = time.perf_counter_ns()
        self.path = SolutionPath()

    def add(self, clause: int | None, f_num: int | None = None, g_val: int | None = None) -> None:
        self.path.records.append(PathRecord(
            iter=len(self.path.records),
            clause=clause,
            f_num=self.f.value if f_num is None else f_num,
            f_den=self.f.total,
            g=self.g.value if g_val is None else g_val,
            wall_ns=time.perf_counter_ns() - self.start,
            evals=self.g.evaluations,
        ))


def greedy(f: Coverage, g: Coverage, budget: int, candidates=None, monitor=None):
    """Plain cost-benefit greedy; every remaining gain is recomputed each round.

    Returns ``(X, path)`` where ``X`` lists candidate ids in selection order.
    """
    f, g = f.fresh(), g.fresh()
    rec = _Recorder(f, g)
    remaining = np.flatnonzero(_candidate_mask(f.n_candidates, candidates))
    X: list[int] = []
    while remaining.size:
        fg = f.gains(remaining)
        gg = g.gains(remaining)
        ok = np.flatnonzero((fg > 0) & (g.value + gg <= budget))
        if ok.size == 0:
            break
        best = ok[0]
        for k in ok[1:]:
            if ratio_gt(int(fg[k]), int(gg[k]), int(fg[best]), int(gg[best])):
                best = k
        j = int(remaining[best])
        if monitor is not None:
            monitor({"t": len(X), "solution": list(X), "chosen": j})
        f.commit(j)
        g.commit(j)
        X.append(j)
        rec.add(j)
        remaining = np.delete(remaining, best)
    rec.path.metadata.update(algorithm="greedy", evaluations=g.evaluations)
    return X, rec.path


class _GainTracker:
    """Exact gains of every candidate, kept current through the element-to-row transpose."""

    def __init__(self, oracle: Coverage):
        self.oracle = oracle
        self.t_indptr, self.t_rows = oracle.transpose()
        self.values = oracle.singletons().astype(np.int64)

    def commit(self, j: int) -> int:
        o = self.oracle
        elems = o.elements(j)
        fresh = elems[~o.covered[elems]]
        delta = o.commit(j)
        if fresh.size:
            lens = self.t_indptr[fresh + 1] - self.t_indptr[fresh]
            offsets = np.repeat(self.t_indptr[fresh] - np.cumsum(lens) + lens, lens)
            rows = self.t_rows[offsets + np.arange(int(lens.sum()), dtype=np.int64)]
            w = np.ones(fresh.size, dtype=np.int64) if o.weights is None else o.weights[fresh]
            self.values -= np.bincount(rows, weights=np.repeat(w, lens),
                                       minlength=self.values.size).astype(np.int64)
        return delta


def incremental_greedy(f: Coverage, g: Coverage, budget: int, candidates=None):
    """Same selections as :func:`greedy`, without re-evaluating gains.

    Exact gains of all candidates are updated after each commit by walking
    only the newly covered elements, so total update work is bounded by the
    size of both incidences. Suited to large candidate pools where nearly
    every candidate gets selected. ``evals`` in the path stays 0.
    """
    _check_exact_keys(f, g)
    f, g = f.fresh(), g.fresh()
    rec = _Recorder(f, g)
    ft, gt = _GainTracker(f), _GainTracker(g)
    alive = np.flatnonzero(_candidate_mask(f.n_candidates, candidates))
    X: list[int] = []
    total = f.total
    while alive.size:
        fv = ft.values[alive]
        gv = gt.values[alive]
        keep = (fv > 0) & (g.value + gv <= budget)
        if not keep.all():
            # both conditions are permanent once they fail
            alive, fv, gv = alive[keep], fv[keep], gv[keep]
            if alive.size == 0:
                break
        # argmax returns the first maximum, i.e. the lowest candidate id
        k = int(np.argmax(_ratio_keys(fv, gv, total)))
        j = int(alive[k])
        ft.commit(j)
        gt.commit(j)
        X.append(j)
        rec.add(j)
        alive = np.delete(alive, k)
    rec.path.metadata.update(algorithm="incremental", evaluations=g.evaluations)
    return X, rec.path


class _MergedQueue:
    """Max-queue over a presorted array of (key, id) plus a heap of re-pushed items.

    The presorted part holds optimistic keys from the start of the round;
    re-pushed items carry tightened keys. Order: key desc, then id asc.
    """

    def __init__(self, ids: np.ndarray, keys: np.ndarray):
        order = np.lexsort((ids, -keys))
        self.ids = ids[order].tolist()
        self.keys = keys[order].tolist()
        self.pos = 0
        self.heap: list[tuple[float, int]] = []

    def _static_top(self):
        if self.pos < len(self.ids):
            return self.keys[self.pos], self.ids[self.pos]
        return None

    def peek(self):
        s = self._static_top()
        h = (-self.heap[0][0], self.heap[0][1]) if self.heap else None
        if s is None:
            return h
        if h is None:
            return s
        return s if (s[0], -s[1]) > (h[0], -h[1]) else h

    def pop(self):
        top = self.peek()
        if top is None:
            return None
        if self.heap and self.heap[0][1] == top[1] and -self.heap[0][0] == top[0]:
            heapq.heappop(self.heap)
        else:
            self.pos += 1
        return top

    def push(self, key: float, j: int) -> None:
        heapq.heappush(self.heap, (-key, j))


def lazy_greedy(f: Coverage, g: Coverage, budget: int, candidates=None, monitor=None):
    """Lazy cost-benefit greedy with an upper bound on ``f``-gains and a lower bound on ``g``-gains.

    ``f``-upper bounds stay stale (valid by submodularity). After each
    commit of ``j`` every ``g``-lower bound drops by ``g(j|X)``, clamped at
    zero. Each round orders the still-feasible candidates by the optimistic
    ratio ``f_upper/g_lower`` and tightens from the top until the tightened
    head beats the next optimistic key.
    """
    _check_exact_keys(f, g)
    f, g = f.fresh(), g.fresh()
    rec = _Recorder(f, g)
    active = _candidate_mask(f.n_candidates, candidates)
    f_upper = np.zeros(f.n_candidates, dtype=np.int64)
    g_lower = np.zeros(f.n_candidates, dtype=np.int64)
    ids = np.flatnonzero(active)
    f_upper[ids] = f.gains(ids)
    g_lower[ids] = g.gains(ids)
    X: list[int] = []
    total = f.total
    queue = None
    while True:
        active &= f_upper > 0
        live = np.flatnonzero(active & (g.value + g_lower <= budget))
        if monitor is not None:
            monitor({"t": len(X), "solution": list(X), "f_upper": f_upper.copy(),
                     "g_lower": g_lower.copy(), "live": live})
        if live.size == 0:
            break
        if queue is None:
            queue = _MergedQueue(live, _ratio_keys(f_upper[live], g_lower[live], total))
        chosen = None
        while True:
            item = queue.pop()
            if item is None:
                break
            j = item[1]
            fj = f.gain(j)
            gj = g.gain(j)
            f_upper[j] = fj
            g_lower[j] = gj
            if fj == 0 or g.value + gj > budget:
                # gains never grow and g(X) never shrinks: j is out for good
                active[j] = False
                continue
            key = _ratio_key(fj, gj, total)
            nxt = queue.peek()
            if nxt is None or (key, -j) > (nxt[0], -nxt[1]):
                chosen = j
                break
            queue.push(key, j)
        if chosen is None:
            break
        f.commit(chosen)
        delta = g.commit(chosen)
        active[chosen] = False
        X.append(chosen)
        if delta:
            np.maximum(g_lower - delta, 0, out=g_lower)
            queue = None
        # with delta == 0 no key moved, so the queue is exactly what a rebuild would give
        rec.add(chosen)
    rec.path.metadata.update(algorithm="lazy", evaluations=g.evaluations)
    return X, rec.path


def _parallel_gains(pool, oracle: Coverage, js: np.ndarray, threads: int, min_chunk: int = 64) -> np.ndarray:
    n_chunks = min(threads, max(1, js.size // min_chunk))
    if pool is None or n_chunks <= 1:
        return oracle.gains(js)
    parts = np.array_split(js, n_chunks)
    # worker calls only read the oracle; the evaluation count is settled here
    before = oracle.evaluations
    results = list(pool.map(oracle.gains, parts))
    oracle.evaluations = before + int(js.size)
    return np.concatenate(results)


def optpes_greedy(f: Coverage, g: Coverage, budget: int, candidates=None, threads: int = 1, monitor=None):
    """Greedy that tightens, in parallel, every candidate whose optimistic ratio
    reaches the best pessimistic ratio.

    Four bounds per candidate: ``f_upper``/``g_upper`` are stale exact gains;
    ``f_lower``/``g_lower`` drop by the committed candidate's gains after
    every commit. The pessimistic threshold is taken over candidates whose
    ``g_upper`` already proves feasibility. ``threads`` changes speed only,
    never the result.
    """
    if threads < 1:
        raise ValueError("threads must be >= 1")
    _check_exact_keys(f, g)
    f, g = f.fresh(), g.fresh()
    rec = _Recorder(f, g)
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        active = _candidate_mask(f.n_candidates, candidates)
        ids = np.flatnonzero(active)
        f_upper = np.zeros(f.n_candidates, dtype=np.int64)
        g_upper = np.zeros(f.n_candidates, dtype=np.int64)
        f_upper[ids] = _parallel_gains(pool, f, ids, threads)
        g_upper[ids] = _parallel_gains(pool, g, ids, threads)
        f_lower = f_upper.copy()
        g_lower = g_upper.copy()
        X: list[int] = []
        total = f.total
        while True:
            # a lower bound that already breaks the budget rules j out for good
            active &= (f_upper > 0) & (g.value + g_lower <= budget)
            live_ids = np.flatnonzero(active)
            if live_ids.size == 0:
                if monitor is not None:
                    monitor({"t": len(X), "solution": list(X), "f_upper": f_upper.copy(),
                             "f_lower": f_lower.copy(), "g_upper": g_upper.copy(),
                             "g_lower": g_lower.copy(), "C": live_ids, "chosen": None})
                break
            sure = live_ids[g.value + g_upper[live_ids] <= budget]
            if sure.size:
                threshold = _ratio_keys(f_lower[sure], g_upper[sure], total).max()
            else:
                threshold = -1.0
            opt = _ratio_keys(f_upper[live_ids], g_lower[live_ids], total)
            C = live_ids[opt >= threshold]
            event = None
            if monitor is not None:
                event = {"t": len(X), "solution": list(X), "f_upper": f_upper.copy(),
                         "f_lower": f_lower.copy(), "g_upper": g_upper.copy(),
                         "g_lower": g_lower.copy(), "C": C.copy()}
            fC = _parallel_gains(pool, f, C, threads)
            gC = _parallel_gains(pool, g, C, threads)
            f_upper[C] = f_lower[C] = fC
            g_upper[C] = g_lower[C] = gC
            ok = (fC > 0) & (g.value + gC <= budget)
            # tightened values that prove a candidate dead remove it for good
            active[C[~ok]] = False
            chosen = None
            if ok.any():
                cand = C[ok]
                keys = _ratio_keys(fC[ok], gC[ok], total)
                chosen = int(cand[np.lexsort((cand, -keys))[0]])
            if event is not None:
                event["chosen"] = chosen
                monitor(event)
            if chosen is None:
                break
            df = f.commit(chosen)
            dg = g.commit(chosen)
            active[chosen] = False
            X.append(chosen)
            np.maximum(f_lower - df, 0, out=f_lower)
            np.maximum(g_lower - dg, 0, out=g_lower)
            rec.add(chosen)
    finally:
        if pool is not None:
            pool.shutdown()
    rec.path.metadata.update(algorithm="optpes", threads=threads, evaluations=g.evaluations)
    return X, rec.path


def constraint_agnostic_greedy(f: Coverage, g: Coverage, budget: int, candidates=None):
    """Lazy greedy on ``f``-gain alone; the budget only filters infeasible candidates."""
    f, g = f.fresh(), g.fresh()
    rec = _Recorder(f, g)
    ids = np.flatnonzero(_candidate_mask(f.n_candidates, candidates))
    bounds = f.gains(ids)
    heap = [(-int(b), int(j)) for b, j in zip(bounds, ids) if b > 0]
    heapq.heapify(heap)
    X: list[int] = []
    while heap:
        _, j = heapq.heappop(heap)
        fj = f.gain(j)
        if fj == 0:
            continue
        gj = g.gain(j)
        if g.value + gj > budget:
            continue
        if heap and (-fj, j) > heap[0]:
            heapq.heappush(heap, (-fj, j))
            continue
        f.commit(j)
        g.commit(j)
        X.append(j)
        rec.add(j)
    rec.path.metadata.update(algorithm="agnostic", evaluations=g.evaluations)
    return X, rec.path


@dataclass
class ModularBound:
    """``g~(X) = constant + sum(weights[j] for j in X)``."""

    weights: np.ndarray
    constant: int

    def __call__(self, X: Iterable[int]) -> int:
        idx = np.asarray(list(X), dtype=np.int64)
        return int(self.constant + self.weights[idx].sum())


def modular_upper_bound(variant: int, g: Coverage, X_t: Iterable[int], candidates=None) -> ModularBound:
    """Modular upper bound of ``g`` that is tight at ``X_t``.

    variant 1: members of ``X_t`` are priced at ``g(j | X_t - j)``, the
    rest at ``g({j})``. variant 2: members at ``g(j | ground - j)``, the
    rest at ``g(j | X_t)``. ``ground`` is ``candidates`` (default: all rows).
    """
    if variant not in (1, 2):
        raise ValueError(f"variant must be 1 or 2, got {variant}")
    X_t = sorted(set(X_t))
    members = np.asarray(X_t, dtype=np.int64)
    g_Xt = g.evaluate(X_t)
    if variant == 1:
        weights = g.singletons()
        removal = g.exclusive(X_t)
    else:
        at = g.fresh()
        for j in X_t:
            at.commit(j)
        weights = at.gains(np.arange(g.n_candidates))
        if candidates is None:
            ground = None
        else:
            ground = sorted(set(candidates) | set(X_t))
        removal = g.exclusive(ground)
    weights = weights.astype(np.int64)
    weights[members] = removal[members]
    constant = g_Xt - int(removal[members].sum())
    return ModularBound(weights, constant)


def knapsack_greedy(f: Coverage, weights: np.ndarray, budget: int, candidates=None) -> list[int]:
    """Submodular knapsack: lazy cost-benefit greedy, then compare with the best single item.

    Zero-weight items with positive gain rank first. Returns candidate ids
    in selection order; the single-item answer is returned only when it
    is strictly better.
    """
    weights = np.asarray(weights, dtype=np.int64)
    if f.total * max(int(weights.max(initial=0)), 1) >= 2**50:
        raise OverflowError("instance too large for exact float ratio keys")
    f = f.fresh()
    total = f.total
    ids = np.flatnonzero(_candidate_mask(f.n_candidates, candidates) & (weights <= budget))
    if ids.size == 0:
        return []
    singles = f.gains(ids)
    keys = _ratio_keys(singles, weights[ids], total)
    heap = [(-k, int(j)) for k, j, s in zip(keys.tolist(), ids.tolist(), singles.tolist()) if s > 0]
    heapq.heapify(heap)
    X: list[int] = []
    used = 0
    while heap:
        _, j = heapq.heappop(heap)
        if used + weights[j] > budget:
            continue
        fj = f.gain(j)
        if fj == 0:
            continue
        key = _ratio_key(fj, int(weights[j]), total)
        if heap and (-key, j) > heap[0]:
            heapq.heappush(heap, (-key, j))
            continue
        f.commit(j)
        used += int(weights[j])
        X.append(j)
    best_single = int(np.argmax(singles))  # first maximum = lowest id
    if singles[best_single] > f.value:
        return [int(ids[best_single])]
    return X


def isk(f: Coverage, g: Coverage, budget: int, variant: int = 1, candidates=None, max_rounds: int = 50):
    """Iterated knapsack: re-solve under a modular upper bound of ``g`` tight at the last iterate.

    Stops at a fixed point or after ``max_rounds``. Every iterate satisfies
    the true budget because the bound dominates ``g``. The path holds one
    record per round.
    """
    f0, g0 = f.fresh(), g.fresh()
    rec = _Recorder(f0, g0)
    X: list[int] = []
    converged = False
    rounds = 0
    for rounds in range(1, max_rounds + 1):
        bound = modular_upper_bound(variant, g, X, candidates)
        g0.evaluations += g.n_candidates
        nxt = knapsack_greedy(f, bound.weights, budget - bound.constant, candidates)
        rec.add(None, f.evaluate(nxt), g.evaluate(nxt))
        same = set(nxt) == set(X)
        X = nxt
        if same:
            converged = True
            break
    rec.path.metadata.update(algorithm=f"isk{variant}", rounds=rounds, converged=converged,
                             evaluations=g0.evaluations)
    if not converged:
        warnings.warn(f"ISK did not reach a fixed point in {max_rounds} rounds", stacklevel=2)
    return X, rec.path


def oracle_exhaustive(f: Coverage, g: Coverage, budget: int, candidates=None):
    """Best feasible subset by enumeration (at most 20 candidates).

    Ties on ``f`` go to the smaller subset, then the lexicographically
    smaller sorted id tuple. Returns ``(X, f_value)`` with ``f_value`` the
    integer numerator.
    """
    ids = np.flatnonzero(_candidate_mask(f.n_candidates, candidates)).tolist()
    if len(ids) > ORACLE_MAX_CANDIDATES:
        raise ValueError(f"exhaustive oracle is capped at {ORACLE_MAX_CANDIDATES} candidates, got {len(ids)}")

    # objective as bit masks over weight units so popcount gives weighted value
    w = f.weights if f.weights is not None else np.ones(f.n_elements, dtype=np.int64)
    offsets = np.concatenate([[0], np.cumsum(w)]).tolist()

    def fmask(j):
        m = 0
        for e in f.elements(j).tolist():
            m |= ((1 << (offsets[e + 1] - offsets[e])) - 1) << offsets[e]
        return m

    def gmask(j):
        m = 0
        for e in g.elements(j).tolist():
            m |= 1 << e
        return m

    fm = [fmask(j) for j in ids]
    gm = [gmask(j) for j in ids]
    best = [0, ()]

    def better(val, chosen):
        bv, bx = best
        if val != bv:
            return val > bv
        return (len(chosen), chosen) < (len(bx), bx)

    def dfs(i, fcov, gcov, chosen):
        if i == len(ids):
            val = fcov.bit_count()
            if better(val, chosen):
                best[0], best[1] = val, chosen
            return
        gnew = gcov | gm[i]
        if gnew.bit_count() <= budget:
            dfs(i + 1, fcov | fm[i], gnew, chosen + (ids[i],))
        dfs(i + 1, fcov, gcov, chosen)

    dfs(0, 0, 0, ())
    return list(best[1]), best[0]


SOLVERS = {
    "greedy": greedy,
    "lazy": lazy_greedy,
    "incremental": incremental_greedy,
    "optpes": optpes_greedy,
    "agnostic": constraint_agnostic_greedy,
    "isk1": lambda f, g, B, candidates=None, **kw: isk(f, g, B, 1, candidates, **kw),
    "isk2": lambda f, g, B, candidates=None, **kw: isk(f, g, B, 2, candidates, **kw),
}


def solve(algorithm: str, f: Coverage, g: Coverage, budget: int, threads: int = 1, **kw):
    """Dispatch by name; ``threads`` is only used by ``optpes``."""
    try:
        solver = SOLVERS[algorithm]
    except KeyError:
        raise ValueError(f"unknown algorithm {algorithm!r}; choose from {', '.join(SOLVERS)}") from None
    if algorithm == "optpes":
        kw["threads"] = threads
    return solver(f, g, budget, **kw)
