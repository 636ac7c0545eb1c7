"""``tierforge`` command line: synth, mine, solve, evaluate, oracle-check.

Exit status is 0 on success, 1 for usage errors (bad flags, unknown
algorithm, missing input files) and 2 for malformed input data.
``oracle-check`` exits 3 if any solver returns an infeasible set or beats
the exhaustive optimum.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
import warnings
from fractions import Fraction
from pathlib import Path

from .baselines import BASELINES, read_selection, write_selection
from .clauseminer import MinerConfig, mine_candidates
from .corpus import DataError, load_corpus, load_query_log, write_corpus, write_query_log
from .evaluation import SynthConfig, evaluate, generate_synthetic, oracle_check
from .matchengine import ClauseIndex, build_index, clause_sort_key, read_clauses, write_clauses
from .pipeline import select_clauses
from .scsk import SOLVERS, SolutionPath, resolve_budget

log = logging.getLogger("tierforge")

CLAUSE_ALGORITHMS = [a for a in SOLVERS if a != "incremental"]
ALGORITHMS = CLAUSE_ALGORITHMS + list(BASELINES)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _env_int(name: str, default: int) -> int:
    value = os.environ.get(name)
    if value is None or value == "":
        return default
    try:
        return int(value)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {value!r}") from None


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _existing(path: str | None, flag: str) -> Path | None:
    if path is None:
        return None
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"{flag}: no such file {path}")
    return p


def _load(args, need_test=False):
    corpus = load_corpus(_existing(args.corpus, "--corpus"))
    train = load_query_log(_existing(args.train, "--train"), corpus.vocab)
    test_path = _existing(getattr(args, "test", None), "--test")
    if need_test and test_path is None:
        raise UsageError("--test is required")
    test = load_query_log(test_path, corpus.vocab) if test_path else None
    return corpus, train, test


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _miner_config(args) -> MinerConfig:
    try:
        return MinerConfig(args.min_support, args.max_clause_len, args.max_candidates)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_synth(args) -> int:
    cfg = SynthConfig(n_docs=args.n_docs, vocab_size=args.vocab_size, n_train=args.n_train,
                      n_test=args.n_test, zipf_exponent=args.zipf, query_len=tuple(args.query_len),
                      seed=args.seed)
    data = generate_synthetic(cfg)
    out = _out_dir(args)
    write_corpus(data.corpus, out / "corpus.tsv")
    write_query_log(data.train, data.corpus.vocab, out / "train.txt")
    write_query_log(data.test, data.corpus.vocab, out / "test.txt")
    (out / "synth.json").write_text(json.dumps(data.metadata, indent=2, sort_keys=True) + "\n")
    print(f"wrote {out}: {cfg.n_docs} docs, {len(data.train)} train / {len(data.test)} test distinct queries, "
          f"novel test fraction {data.metadata['novel_test_fraction']:.3f}")
    return 0


def cmd_mine(args) -> int:
    corpus, train, _ = _load(args)
    cfg = _miner_config(args)
    clauses, support = mine_candidates(train, cfg, with_support=True)
    out = _out_dir(args)
    header = f"#min_support={cfg.min_support}\n#max_clause_len={cfg.max_clause_len}\n#n={train.n}"
    write_clauses(clauses, corpus.vocab, out / "candidates.txt", header=header, supports=support)
    print(f"{len(clauses)} candidate clauses -> {out / 'candidates.txt'}")
    return 0


def cmd_solve(args) -> int:
    if args.algorithm not in ALGORITHMS:
        raise UsageError(f"unknown algorithm {args.algorithm!r}; choose from {', '.join(ALGORITHMS)}")
    corpus, train, test = _load(args)
    budget = resolve_budget(args.budget, corpus.n_docs)
    index = build_index(corpus)
    out = _out_dir(args)
    vocab = corpus.vocab
    started = time.perf_counter()
    extra = {"algorithm": args.algorithm, "threads": args.threads, "seed": args.seed}
    if args.algorithm in BASELINES:
        sel = BASELINES[args.algorithm](corpus, train, index, budget)
        elapsed = time.perf_counter() - started
        write_selection(sel, vocab, out / "clauses.txt")
        path = sel.path or SolutionPath()
        labels = [" ".join(vocab.terms_of(q)) for q in _flow_order(train)] if sel.path else None
        classifier, tier1 = sel, sel.tier1_docs
        extra["selected"] = len(sel)
    else:
        cfg = _miner_config(args)
        sol = select_clauses(index, train, budget, min_support=cfg.min_support,
                             max_clause_len=cfg.max_clause_len, max_candidates=cfg.max_candidates,
                             algorithm=args.algorithm, threads=args.threads)
        elapsed = time.perf_counter() - started
        header = f"#type=clause\n#method={args.algorithm}\n#budget={budget}"
        write_clauses(sol.clauses, vocab, out / "clauses.txt", header=header)
        path = sol.path
        labels = [" ".join(vocab.terms_of(c)) for c in sol.stats.clauses]
        classifier, tier1 = sol.classifier, sol.tier1_docs
        extra.update(candidates=len(sol.stats.clauses), selected=len(sol.selected),
                     min_support=str(cfg.min_support), max_clause_len=cfg.max_clause_len)
        extra.update({k: v for k, v in path.metadata.items() if k not in extra})
    path.to_csv(out / "path.csv", labels)
    (out / "tier1_docs.txt").write_text("".join(f"{d}\n" for d in tier1.ids.tolist()))
    reference = None
    if args.relative and test is not None:
        ref = BASELINES["flowgreedy"](corpus, train, index, budget)
        reference = evaluate(ref, ref.tier1_docs, train, test, index).test_coverage
    rep = evaluate(classifier, tier1, train, test, index, budget=budget, method=args.algorithm,
                   reference_test_coverage=reference)
    extra["solve_seconds"] = round(elapsed, 3)
    rep.extra.update(extra)
    rep.to_json(out / "report.json")
    _summary(rep)
    return 0


def _flow_order(train):
    return sorted((q.terms for q in train.queries), key=clause_sort_key)


def cmd_evaluate(args) -> int:
    corpus, train, test = _load(args, need_test=True)
    index = build_index(corpus)
    clauses_path = _existing(args.clauses, "--clauses")
    clauses, meta = read_clauses(clauses_path, corpus.vocab)
    if meta.get("type") == "query":
        classifier = read_selection(clauses_path, corpus.vocab, index)
        tier1 = classifier.tier1_docs
    else:
        classifier = ClauseIndex(clauses)
        tier1 = classifier.tier1_documents(index)
    budget = int(meta["budget"]) if meta.get("budget") else None
    rep = evaluate(classifier, tier1, train, test, index, budget=budget,
                   method=meta.get("method", ""), reference_test_coverage=args.reference_coverage)
    out = _out_dir(args)
    rep.to_json(out / "report.json")
    rep.to_keyvalue(out / "report.txt")
    _summary(rep)
    return 0


def cmd_oracle_check(args) -> int:
    if not 1 <= args.max_candidates <= 20:
        raise UsageError("--max-candidates must be in 1..20")
    table = oracle_check(args.instances, args.max_candidates, args.seed)
    print(f"{'algorithm':<12}{'feasible':>10}{'<=opt':>8}{'optimal':>9}{'mean f/opt':>12}")
    for name, row in table.items():
        n = row["instances"]
        print(f"{name:<12}{row['feasible']:>6}/{n:<3}{row['bounded']:>4}/{n:<3}"
              f"{row['optimal']:>5}/{n:<3}{row['mean_ratio']:>12.4f}")
    ok = all(r["feasible"] == r["instances"] and r["bounded"] == r["instances"] for r in table.values())
    return 0 if ok else 3


def _summary(rep) -> None:
    test = "" if rep.test_coverage is None else f" test={float(rep.test_coverage):.4f}"
    print(f"{rep.method}: |D1|={rep.tier1_docs}/{rep.budget} train={float(rep.train_coverage):.4f}"
          f"{test} violations={rep.violations}")


def build_parser() -> argparse.ArgumentParser:
    threads = _env_int("TIERFORGE_THREADS", os.cpu_count() or 1)
    seed = _env_int("TIERFORGE_SEED", 42)
    p = _Parser(prog="tierforge", description="Select Tier-1 clauses for a two-tier search index.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def data_flags(sp, test=False):
        sp.add_argument("--corpus", required=True, help="doc_id<TAB>terms file")
        sp.add_argument("--train", required=True, help="training query log")
        if test:
            sp.add_argument("--test", help="held-out query log")
        sp.add_argument("--out", default=".", help="output directory")

    def miner_flags(sp):
        sp.add_argument("--min-support", type=_fraction, default=Fraction(1, 10_000))
        sp.add_argument("--max-clause-len", type=int, default=3)
        sp.add_argument("--max-candidates", type=int, default=None)

    sp = sub.add_parser("synth", help="write a synthetic corpus and train/test logs")
    sp.add_argument("--out", required=True)
    sp.add_argument("--n-docs", type=int, default=50_000)
    sp.add_argument("--vocab-size", type=int, default=20_000)
    sp.add_argument("--n-train", type=int, default=100_000)
    sp.add_argument("--n-test", type=int, default=20_000)
    sp.add_argument("--zipf", type=float, default=1.0)
    sp.add_argument("--query-len", type=int, nargs=2, default=(1, 4), metavar=("MIN", "MAX"))
    sp.add_argument("--seed", type=int, default=seed)
    sp.set_defaults(func=cmd_synth)

    sp = sub.add_parser("mine", help="mine frequent candidate clauses")
    data_flags(sp)
    miner_flags(sp)
    sp.set_defaults(func=cmd_mine)

    sp = sub.add_parser("solve", help="select Tier 1 and report coverage")
    data_flags(sp, test=True)
    miner_flags(sp)
    sp.add_argument("--algorithm", default="optpes", help=f"one of: {', '.join(ALGORITHMS)}")
    sp.add_argument("--budget", default="0.5x", help="document count, or a fraction of the corpus like 0.5x")
    sp.add_argument("--threads", type=int, default=threads)
    sp.add_argument("--seed", type=int, default=seed)
    sp.add_argument("--relative", action="store_true",
                    help="also run flowgreedy and report test coverage relative to it")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("evaluate", help="coverage of an existing clauses.txt")
    data_flags(sp, test=True)
    sp.add_argument("--clauses", required=True)
    sp.add_argument("--reference-coverage", type=float, default=None)
    sp.set_defaults(func=cmd_evaluate)

    sp = sub.add_parser("oracle-check", help="all solvers vs exhaustive search on tiny instances")
    sp.add_argument("--instances", type=int, default=100)
    sp.add_argument("--max-candidates", type=int, default=12)
    sp.add_argument("--seed", type=int, default=seed)
    sp.set_defaults(func=cmd_oracle_check)
    return p


def main(argv=None) -> int:
    try:
        parser = build_parser()
    except UsageError as exc:
        print(f"tierforge: error: {exc}", file=sys.stderr)
        return 1
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    if getattr(args, "threads", 1) < 1:
        parser.error("--threads must be >= 1")
    with warnings.catch_warnings():
        warnings.simplefilter("always")
        warnings.showwarning = lambda message, *rest, **kw: log.warning("%s", message)
        try:
            return args.func(args)
        except UsageError as exc:
            print(f"tierforge: error: {exc}", file=sys.stderr)
            return 1
        except DataError as exc:
            print(f"tierforge: data error: {exc}", file=sys.stderr)
            return 2
        except ValueError as exc:
            # bad argument values caught past argparse, e.g. an unparsable budget
            print(f"tierforge: error: {exc}", file=sys.stderr)
            return 1


if __name__ == "__main__":
    sys.exit(main())
