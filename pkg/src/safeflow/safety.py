"""Excess flow, safety, and the decomposition-based enumeration pipeline.

The excess of a path ``u1..uk`` is the flow on its first edge minus, at each
internal vertex, the flow that leaves the path there.  A path is safe (it is
a subpath of some path of every flow decomposition) exactly when its excess is
positive.  Extending a path by one edge can only lower its excess:

* prepending ``(x, y)`` loses ``f_in(y) - f(x, y)``
* appending ``(x, y)`` loses ``f_out(x) - f(x, y)``

The pipeline here finds all maximal safe paths by first taking any flow
decomposition (every maximal safe path lies on one of its paths), scanning
each decomposition path with two pointers, and discarding results contained
in other results.  It is simple but its output size is bounded only by the
total length of the decomposition.
"""
from __future__ import annotations

from .aho import filter_contained
from .flowgraph import FlowGraph
from .records import ConciseRecord, Interval, WeightedSafePath

BRUTE_FORCE_MAX_VERTICES = 64
DECOMP_MAX_EDGES = 12
DECOMP_MAX_FLOW = 32


class OracleGuardError(ValueError):
    """Input too large for an exhaustive oracle."""


def _path_edges(g: FlowGraph, path):
    em = g.edge_map()
    try:
        return [em[(a, b)] for a, b in zip(path, path[1:])]
    except KeyError as exc:
        raise ValueError(f"not a path of the graph: missing edge {exc.args[0]}") from None


def excess_flow(g: FlowGraph, path) -> int:
    """Excess of a path with at least one edge."""
    if len(path) < 2:
        raise ValueError("path needs at least one edge")
    fe = _path_edges(g, path)
    f_out = g.f_out
    exc = fe[0]
    for i in range(1, len(path) - 1):
        exc -= int(f_out[path[i]]) - fe[i]
    if __debug__:
        # the same quantity measured on incoming edges
        f_in = g.f_in
        inc = fe[-1]
        for i in range(1, len(path) - 1):
            inc -= int(f_in[path[i]]) - fe[i - 1]
        assert inc == exc, (path, inc, exc)
    return exc


def delta_extend(g: FlowGraph, path, side: str, edge) -> int:
    """Change in excess when ``edge`` is added on ``side`` ('left'/'right')."""
    x, y = edge
    fxy = g.flow(x, y)
    if side == "left":
        if y != path[0]:
            raise ValueError(f"edge {edge} does not end at {path[0]}")
        return -(int(g.f_in[y]) - fxy)
    if side == "right":
        if x != path[-1]:
            raise ValueError(f"edge {edge} does not start at {path[-1]}")
        return -(int(g.f_out[x]) - fxy)
    raise ValueError("side must be 'left' or 'right'")


def is_safe(g: FlowGraph, path) -> bool:
    return excess_flow(g, path) > 0


# -- decomposition pipeline -------------------------------------------------

def candidate_flow_decomposition(g: FlowGraph) -> list[WeightedSafePath]:
    """Greedy decomposition: lowest-id source, then lowest-id out-edge.

    Each path carries the minimum residual flow along it.  The result is a
    valid flow decomposition, used only as a scaffold for the scan below.
    """
    heads = g.heads.tolist()
    res = g.flows.tolist()
    ostart = g.out_start.tolist()
    ptr = ostart[:-1]
    rem = g.f_out.tolist()
    out = []
    for s in g.sources():
        while rem[s] > 0:
            path = [s]
            eids = []
            u = s
            while True:
                i = ptr[u]
                end = ostart[u + 1]
                while i < end and res[i] == 0:
                    i += 1
                ptr[u] = i
                if i == end:
                    break
                eids.append(i)
                u = heads[i]
                path.append(u)
            w = min(res[i] for i in eids)
            for i, v in zip(eids, path):
                res[i] -= w
                rem[v] -= w
            out.append(WeightedSafePath(tuple(path), w))
    return out


def two_pointer_scan(g: FlowGraph, path) -> list[WeightedSafePath]:
    """Safe subpaths of ``path`` that are maximal among its subpaths.

    Only subpaths with at least two edges are returned.
    """
    L = len(path) - 1
    if L < 1:
        return []
    fe = _path_edges(g, path)
    f_out = g.f_out
    f_in = g.f_in
    lo = [0] * (L + 1)
    for t in range(1, L):
        lo[t] = int(f_out[path[t]]) - fe[t]
    found = []
    j, exc, prev = 1, fe[0], -1
    for i in range(L):
        if j <= i:
            j, exc = i + 1, fe[i]
        while j < L and exc - lo[j] > 0:
            exc -= lo[j]
            j += 1
        if j > prev:
            if j - i >= 2:
                found.append(WeightedSafePath(tuple(path[i:j + 1]), exc))
            prev = j
        if j == L:
            break
        exc += int(f_in[path[i + 1]]) - fe[i]
    return found


def filter_subpaths(paths):
    """Drop paths that are duplicates of, or contained in, another path."""
    paths = list(paths)
    keep = filter_contained([p.vertices for p in paths])
    keep.sort()
    return [paths[i] for i in keep]


def raw_rep(g: FlowGraph) -> list[WeightedSafePath]:
    """All maximal safe paths via candidate decomposition and filtering."""
    found = []
    for p in candidate_flow_decomposition(g):
        found.extend(two_pointer_scan(g, p.vertices))
    return filter_subpaths(found)


def con_rep(g: FlowGraph) -> list[ConciseRecord]:
    """Maximal safe paths grouped onto decomposition paths.

    Each surviving path is kept on the decomposition path that first produced
    it.  Overlapping paths on one decomposition path share a carrier; disjoint
    groups get separate carriers.
    """
    decomp = candidate_flow_decomposition(g)
    found = []
    for k, p in enumerate(decomp):
        verts = p.vertices
        for s in two_pointer_scan(g, verts):
            start = _find_run(verts, s.vertices)
            found.append((k, start, start + len(s.vertices) - 1, s.excess))
    keep = filter_contained([decomp[k].vertices[a:b + 1] for k, a, b, _ in found])
    keep.sort()
    by_path: dict[int, list] = {}
    for i in keep:
        k, a, b, f = found[i]
        by_path.setdefault(k, []).append((a, b, f))
    out = []
    for k in sorted(by_path):
        verts = decomp[k].vertices
        items = sorted(by_path[k])
        group = [items[0]]
        reach = items[0][1]
        for a, b, f in items[1:]:
            if a <= reach:
                group.append((a, b, f))
                reach = max(reach, b)
            else:
                out.append(_carrier(verts, group))
                group = [(a, b, f)]
                reach = b
        out.append(_carrier(verts, group))
    return out


def _find_run(seq, run):
    n = len(run)
    first = run[0]
    for i, v in enumerate(seq):
        if v == first and tuple(seq[i:i + n]) == run:
            return i
    raise ValueError("subpath not found")


def _carrier(verts, group):
    a = group[0][0]
    b = max(x[1] for x in group)
    ivs = tuple(Interval(verts[x], verts[y], f) for x, y, f in group)
    return ConciseRecord(tuple(verts[a:b + 1]), ivs)


# -- exhaustive oracles -----------------------------------------------------

def _excess_by_definition(f_out, em, path):
    exc = em[(path[0], path[1])]
    for i in range(1, len(path) - 1):
        exc -= f_out[path[i]] - em[(path[i], path[i + 1])]
    return exc


def all_safe_paths_bruteforce(g: FlowGraph, max_vertices=BRUTE_FORCE_MAX_VERTICES):
    """Every safe path with at least one edge, mapped to its excess."""
    if g.n > max_vertices:
        raise OracleGuardError(f"brute force limited to {max_vertices} vertices, got {g.n}")
    em = g.edge_map()
    f_out = g.f_out.tolist()
    succ = [[] for _ in range(g.n)]
    for u, v in em:
        succ[u].append(v)
    safe = {}
    stack = [[u, v] for (u, v) in em]
    while stack:
        p = stack.pop()
        e = _excess_by_definition(f_out, em, p)
        if e <= 0:
            continue
        safe[tuple(p)] = e
        for w in succ[p[-1]]:
            stack.append(p + [w])
    return safe


def maximal_safe_paths_bruteforce(g: FlowGraph, max_vertices=BRUTE_FORCE_MAX_VERTICES):
    """Maximal safe paths with at least two edges, sorted."""
    safe = all_safe_paths_bruteforce(g, max_vertices)
    pred = [[] for _ in range(g.n)]
    succ = [[] for _ in range(g.n)]
    for u, v in g.edge_map():
        pred[v].append(u)
        succ[u].append(v)
    out = []
    for p, e in safe.items():
        if len(p) < 3:
            continue
        if any((x,) + p in safe for x in pred[p[0]]):
            continue
        if any(p + (y,) in safe for y in succ[p[-1]]):
            continue
        out.append(WeightedSafePath(p, e))
    out.sort()
    return out


enumerate_all_maximal_safe_paths_bruteforce = maximal_safe_paths_bruteforce


def _source_sink_paths(g: FlowGraph):
    succ = [[] for _ in range(g.n)]
    for u, v in sorted(g.edge_map()):
        succ[u].append(v)
    out = []

    def walk(p):
        nxt = succ[p[-1]]
        if not nxt:
            out.append(tuple(p))
            return
        for w in nxt:
            walk(p + [w])

    for s in g.sources():
        if succ[s]:
            walk([s])
    return sorted(out)


def enumerate_flow_decompositions(g: FlowGraph, max_edges=DECOMP_MAX_EDGES,
                                  max_flow=DECOMP_MAX_FLOW):
    """Every flow decomposition as a sorted tuple of (path, weight) pairs.

    Two decompositions are the same when they give each path the same total
    weight.
    """
    if g.m > max_edges or g.total_flow() > max_flow:
        raise OracleGuardError(
            f"decomposition oracle limited to {max_edges} edges and flow {max_flow}")
    paths = _source_sink_paths(g)
    em = g.edge_map()
    eid = {e: i for i, e in enumerate(sorted(em))}
    res = [em[e] for e in sorted(em)]
    pe = [[eid[(a, b)] for a, b in zip(p, p[1:])] for p in paths]
    # last path index covering each edge, for pruning
    last = [-1] * len(res)
    for k, es in enumerate(pe):
        for i in es:
            last[i] = k
    results = []
    chosen = [0] * len(paths)

    def rec(k):
        if k == len(paths):
            if not any(res):
                results.append(tuple((paths[i], chosen[i])
                                     for i in range(len(paths)) if chosen[i]))
            return
        es = pe[k]
        cap = min(res[i] for i in es)
        for w in range(cap + 1):
            for i in es:
                res[i] -= w
            if all(res[i] == 0 for i in es if last[i] == k):
                chosen[k] = w
                rec(k + 1)
            for i in es:
                res[i] += w
        chosen[k] = 0

    if all(last[i] >= 0 for i in range(len(res))):
        rec(0)
    return results


def safe_by_decompositions(g: FlowGraph, path, decompositions=None) -> bool:
    """Definition-level safety: ``path`` lies on some path of every decomposition."""
    if decompositions is None:
        decompositions = enumerate_flow_decompositions(g)
    run = tuple(path)
    n = len(run)

    def contains(p):
        return any(p[i:i + n] == run for i in range(len(p) - n + 1))

    return all(any(contains(p) for p, _ in d) for d in decompositions)


__all__ = [
    "excess_flow", "delta_extend", "is_safe", "candidate_flow_decomposition",
    "two_pointer_scan", "filter_subpaths", "raw_rep", "con_rep",
    "all_safe_paths_bruteforce", "maximal_safe_paths_bruteforce",
    "enumerate_all_maximal_safe_paths_bruteforce",
    "enumerate_flow_decompositions", "safe_by_decompositions", "OracleGuardError",
]
