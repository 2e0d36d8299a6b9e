"""Command line front end: ``safeflow run|verify|bench|stats|gen``."""
from __future__ import annotations

import argparse
import itertools
import sys
import time
from contextlib import nullcontext

from ..codec import dataset_statistics, write_statistics_csv
from ..flowgraph import GraphError, funnel_vertex_ratio, is_funnel, iter_graphs, write_graph
from ..randgen import GenParams, ParameterError, generate
from .bench import (ALGORITHMS, DEFAULT_TIMEOUT, OPTIMAL_ALGORITHMS, BenchRecord, append_csv,
                    bench_cell, run_algorithm)
from .verify import verify_graphs


def _open_in(path):
    return nullcontext(sys.stdin) if path in (None, "-") else open(path)


def _open_out(path):
    return nullcontext(sys.stdout) if path in (None, "-") else open(path, "w")


def _maxrss_mb():
    import resource
    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024.0


def cmd_run(args) -> int:
    records = []
    with _open_out(args.out) as out, _open_in(args.inp) as fh:
        log = sys.stderr if out is sys.stdout else sys.stdout
        for g in iter_graphs(fh):
            out.write(f"#{g.name}\n")
            rep, secs = run_algorithm(args.algo, g, out)
            rec = BenchRecord(args.dataset, g.name, args.algo, secs * 1000.0,
                              _maxrss_mb(), rep.tokens, rep.bytes, g.n, g.m)
            records.append(rec)
            print(rec.line(), file=log)
    if args.csv:
        append_csv(args.csv, records)
    print(f"{len(records)} graphs, {sum(r.tokens for r in records)} tokens", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    with _open_in(args.inp) as fh:
        graphs = list(iter_graphs(fh))
    t0 = time.perf_counter()
    count, bad = verify_graphs(graphs, args.guard, fault=args.inject_fault)
    secs = time.perf_counter() - t0
    if bad is not None:
        print(bad.describe())
        return 1
    print(f"PASS {count} graphs in {secs:.1f} s")
    return 0


def _gen_params(args, n, seed):
    return GenParams(n=n, k=args.k, d=args.d if args.d is not None else min(n, 10),
                     p=args.p, seed=seed, flow_range=(args.flow_min, args.flow_max))


def cmd_gen(args) -> int:
    ratios = []
    funnels = 0
    with _open_out(args.out) as out:
        for i in range(args.count):
            g = generate(args.model, _gen_params(args, args.n, args.seed + i))
            g.name = f"{i} {g.name} seed={args.seed + i}"
            write_graph(g, out)
            ratios.append(funnel_vertex_ratio(g))
            funnels += is_funnel(g)
    mean = sum(ratios) / len(ratios) if ratios else 0.0
    print(f"{args.count} graphs, funnel vertex ratio mean {mean:.4f} "
          f"min {min(ratios, default=0):.4f} max {max(ratios, default=0):.4f}, "
          f"{funnels} funnels", file=sys.stderr)
    return 0


def cmd_stats(args) -> int:
    rows = []
    for path in args.inp:
        with _open_in(path) as fh:
            graphs = (g for g in iter_graphs(fh) if not (args.skip_funnels and is_funnel(g)))
            row = {"dataset": path}
            row.update(dataset_statistics(graphs))
            rows.append(row)
    with _open_out(args.csv) as out:
        write_statistics_csv(rows, out)
    return 0


def cmd_bench(args) -> int:
    algos = args.algo or list(OPTIMAL_ALGORITHMS)
    if args.inp:
        sources = []
        for path in args.inp:
            with open(path) as fh:
                sources.extend((path, g) for g in iter_graphs(fh))
    else:
        sources = ((f"{args.model}", generate(args.model, _gen_params(args, n, seed)))
                   for n, seed in itertools.product(args.n, range(args.seed, args.seed + args.seeds)))
    for dataset, g in sources:
        for algo in algos:
            rec = bench_cell(algo, g, dataset, reps=args.reps, warmup=args.warmup,
                             timeout=args.timeout, mem_limit_mb=args.mem_limit)
            print(rec.line(), flush=True)
            if args.csv:
                append_csv(args.csv, [rec])
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="safeflow",
                                 description="Maximal safe paths in flow graphs.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def gen_flags(p, multi_n=False):
        p.add_argument("--model", default="improved", choices=["uniform", "powerlaw", "improved"])
        if multi_n:
            p.add_argument("--n", type=int, nargs="+", default=[10**5])
        else:
            p.add_argument("--n", type=int, default=1000)
        p.add_argument("--k", type=int, default=10)
        p.add_argument("--d", type=int, default=None, help="vertices per path (default min(n, 10))")
        p.add_argument("--p", type=float, default=0.81, help="funnel probability (improved)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--flow-min", type=int, default=1)
        p.add_argument("--flow-max", type=int, default=1000)

    p = sub.add_parser("run", help="run one algorithm over a dataset")
    p.add_argument("--algo", required=True, choices=list(ALGORITHMS))
    p.add_argument("--in", dest="inp", default="-")
    p.add_argument("--out", default="-")
    p.add_argument("--csv")
    p.add_argument("--dataset", default="")
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("verify", help="cross-check all algorithms against brute force")
    p.add_argument("--in", dest="inp", default="-")
    p.add_argument("--guard", type=int, default=64, help="maximum vertices per graph")
    p.add_argument("--inject-fault", choices=["rawrep", "optrawrep", "optconrep", "optrep"],
                   help="drop one record from this algorithm (negative control)")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("bench", help="time and memory over generated or given graphs")
    gen_flags(p, multi_n=True)
    p.add_argument("--seeds", type=int, default=1, help="graphs per n")
    p.add_argument("--in", dest="inp", nargs="*")
    p.add_argument("--algo", nargs="+", choices=list(ALGORITHMS))
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--warmup", type=int, default=0)
    p.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT, help="seconds per run")
    p.add_argument("--mem-limit", type=float, default=None, help="MB; larger runs are DNF")
    p.add_argument("--csv")
    p.set_defaults(fn=cmd_bench)

    p = sub.add_parser("stats", help="safe-path statistics per dataset")
    p.add_argument("--in", dest="inp", nargs="+", required=True)
    p.add_argument("--csv", default="-")
    p.add_argument("--skip-funnels", action="store_true")
    p.set_defaults(fn=cmd_stats)

    p = sub.add_parser("gen", help="write random flow graphs")
    gen_flags(p)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--out", default="-")
    p.set_defaults(fn=cmd_gen)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (GraphError, ParameterError, OSError, ValueError) as exc:
        print(f"safeflow {args.cmd}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
