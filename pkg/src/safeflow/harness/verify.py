"""Cross-checking every enumerator against the brute-force oracle."""
from __future__ import annotations

import os
from dataclasses import dataclass, field

from ..flowgraph import FlowGraph, build_max_edge_index, format_graphs
from ..optenum import build_extension_forests, expand_all, opt_concise, opt_raw_enumerate, opt_rep
from ..safety import candidate_flow_decomposition, maximal_safe_paths_bruteforce, raw_rep

CHECKED = ("rawrep", "optrawrep", "optconrep", "optrep")


def safe_path_sets(g: FlowGraph) -> dict[str, list]:
    """Maximal safe paths (sorted, with excess) from each enumerator."""
    index = build_max_edge_index(g)
    forests = build_extension_forests(g, index)
    return {
        "rawrep": sorted(raw_rep(g)),
        "optrawrep": sorted(opt_raw_enumerate(g, index)),
        "optconrep": sorted(p for r in opt_concise(g, index) for p in r.expand()),
        "optrep": sorted(expand_all(g, opt_rep(g, index, forests), forests)),
    }


@dataclass
class Mismatch:
    graph: str
    algo: str
    missing: list = field(default_factory=list)
    extra: list = field(default_factory=list)
    witness: str = ""

    def describe(self) -> str:
        lines = [f"FAIL graph {self.graph!r}: {self.algo} disagrees with brute force"]
        for p in self.missing[:5]:
            lines.append(f"  missing {' '.join(map(str, p.vertices))} ({p.excess})")
        for p in self.extra[:5]:
            lines.append(f"  extra   {' '.join(map(str, p.vertices))} ({p.excess})")
        if self.witness:
            lines.append("  minimized witness:")
            lines.extend("    " + s for s in self.witness.splitlines())
        return "\n".join(lines)


def _corrupt(paths):
    return paths[:-1] if paths else paths


def check_graph(g: FlowGraph, max_vertices: int = 64, fault: str | None = None):
    """First disagreeing enumerator on ``g`` as a Mismatch, or None."""
    truth = maximal_safe_paths_bruteforce(g, max_vertices)
    sets = safe_path_sets(g)
    if fault:
        sets[fault] = _corrupt(sets[fault])
    want = set(truth)
    for algo in CHECKED:
        got = sets[algo]
        have = set(got)
        if have != want or len(got) != len(have):
            dup = [p for p in got if got.count(p) > 1]
            return Mismatch(g.name, algo, sorted(want - have), sorted(have - want) + dup)
    return None


def _rebuild(n, paths, name):
    edges = {}
    for vs, w in paths:
        for a, b in zip(vs, vs[1:]):
            edges[(a, b)] = edges.get((a, b), 0) + w
    used = sorted({v for e in edges for v in e})
    relabel = {v: i for i, v in enumerate(used)}
    return FlowGraph(len(used), [(relabel[a], relabel[b], f) for (a, b), f in edges.items()],
                     name=name)


def minimize(g: FlowGraph, still_fails) -> FlowGraph:
    """Shrink ``g`` while ``still_fails(graph)`` holds.

    The graph is rebuilt from a subset of its decomposition paths, with path
    weights lowered where possible, so every candidate is a valid flow graph.
    """
    paths = [(p.vertices, p.excess) for p in candidate_flow_decomposition(g)]
    best = g
    changed = True
    while changed:
        changed = False
        for i in range(len(paths)):
            trial = paths[:i] + paths[i + 1:]
            if not trial:
                continue
            h = _rebuild(g.n, trial, g.name)
            if still_fails(h):
                paths, best, changed = trial, h, True
                break
        if changed:
            continue
        for i, (vs, w) in enumerate(paths):
            for nw in (1, w // 2):
                if 0 < nw < w:
                    trial = paths[:i] + [(vs, nw)] + paths[i + 1:]
                    h = _rebuild(g.n, trial, g.name)
                    if still_fails(h):
                        paths, best, changed = trial, h, True
                        break
            if changed:
                break
    return best


def _check_one(args):
    g, guard, fault = args
    return check_graph(g, guard, fault)


def verify_graphs(graphs, max_vertices: int = 64, fault: str | None = None,
                  workers: int | None = None):
    """Check every graph; returns (checked count, first Mismatch or None).

    ``fault`` drops one record from the named enumerator, to show that the
    check notices.  ``workers`` defaults to the SAFEFLOW_THREADS variable.
    """
    graphs = list(graphs)
    for g in graphs:
        if g.n > max_vertices:
            raise ValueError(f"graph {g.name!r} has {g.n} vertices, above the guard {max_vertices}")
    if workers is None:
        workers = int(os.environ.get("SAFEFLOW_THREADS", "1") or 1)
    jobs = [(g, max_vertices, fault) for g in graphs]
    if workers > 1 and len(graphs) > 1:
        import multiprocessing as mp
        with mp.get_context("fork").Pool(workers) as pool:
            results = pool.map(_check_one, jobs, chunksize=16)
    else:
        results = []
        for job in jobs:
            results.append(_check_one(job))
            if results[-1] is not None:
                break
    for g, res in zip(graphs, results):
        if res is not None:
            def fails(h, algo=res.algo):
                m = check_graph(h, max_vertices, fault)
                return m is not None and m.algo == algo
            small = minimize(g, fails)
            final = check_graph(small, max_vertices, fault) or res
            final.graph = g.name
            final.witness = format_graphs([small])
            return len(results), final
    return len(results), None
