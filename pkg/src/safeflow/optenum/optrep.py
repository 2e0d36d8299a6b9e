"""Optimal representation: each maximal safe path as endpoints plus one edge.

Every maximal safe path ``P`` has a representative edge ``(x, y)`` such that
the part of ``P`` left of ``y`` follows unique max in-edges backwards from
``x`` and the part right of ``x`` follows unique max out-edges from ``y``.
Storing ``(left, x, y, right, excess)`` is therefore enough to rebuild ``P``
from the graph.

Trivial records are those whose edge is the unique max in-edge of its head.
Then the whole path lies in the in-forest and ends at a leaf-side vertex.
They are found by sliding a window down each root-to-leaf path of the
in-forest.  Every other edge is tried as a non-trivial representative with a
two-pointer pass that moves the right end along the out-forest.
"""
from __future__ import annotations

import numpy as np

from ..flowgraph import FlowGraph, MaxEdgeIndex, build_max_edge_index, typed
from ..records import OptimalRecord, WeightedSafePath
from .forest import build_extension_forests

_NONE = 1 << 62     # slack of a vertex with no edges on that side


def opt_rep(g: FlowGraph, index: MaxEdgeIndex | None = None, forests=None):
    """Yield an OptimalRecord for every maximal safe path with >= 2 edges."""
    index = index or build_max_edge_index(g)
    fi, fo = forests or build_extension_forests(g, index)
    # slack_in[x] < flow  <=>  some left extension of a path starting at x stays safe
    slack_in = typed(np.where(np.diff(g.in_start) > 0, g.f_in - index.in_flow, _NONE))
    slack_out = typed(np.where(np.diff(g.out_start) > 0, g.f_out - index.out_flow, _NONE))

    pi, ci, ei = fi.parent, fi.cum, fi.edge_flow
    po, co = fo.parent, fo.cum

    # trivial records
    par = np.asarray(pi)
    has_child = np.zeros(g.n, dtype=bool)
    has_child[par[par >= 0]] = True
    leaves = np.flatnonzero(~has_child & (par >= 0)).tolist()
    del par, has_child
    marked = bytearray(g.n)
    for leaf in leaves:
        u = leaf
        while not marked[u]:
            marked[u] = 1
            v = pi[u]
            fvu = ei[u]
            x = fi.reach(v, fvu)
            flow = fvu - (ci[v] - ci[x])
            if x != v:
                if slack_in[x] >= flow and slack_out[u] >= flow:
                    yield OptimalRecord(x, v, u, u, flow, True)
            y = pi[x]
            if y < 0:
                break
            u = fi.deepest_safe_below(y, u)

    # non-trivial records
    tails = typed(g.tails, "i")
    heads = typed(g.heads, "i")
    flows = typed(g.flows)
    for e in range(g.m):
        u, v, f = tails[e], heads[e], flows[e]
        if pi[v] == u:
            continue
        pu, pv = pi[u], po[v]
        # neither side can grow: only the single edge is safe
        if (pu < 0 or ci[u] - ci[pu] >= f) and (pv < 0 or co[v] - co[pv] >= f):
            continue
        exc = f
        while exc > 0:
            l = fi.reach(u, exc)
            exc_l = f - (ci[u] - ci[l])
            r = fo.reach(v, exc_l)
            flow = exc_l - (co[v] - co[r])
            if l != u or r != v:
                if slack_in[l] >= flow:
                    yield OptimalRecord(l, u, v, r, flow, False)
            nr = po[r]
            if nr < 0:
                break
            exc = f - (co[v] - co[nr])


def expand_optimal(g: FlowGraph, rec: OptimalRecord, forests=None) -> WeightedSafePath:
    """Rebuild the full path of an OptimalRecord from the graph."""
    if forests is None:
        forests = build_extension_forests(g)
    fi, fo = forests
    pi, po = fi.parent, fo.parent
    left = [rec.edge_tail]
    x = rec.edge_tail
    while x != rec.left:
        x = pi[x]
        if x < 0:
            raise ValueError(f"{rec.left} is not reachable left of edge "
                             f"({rec.edge_tail}, {rec.edge_head})")
        left.append(x)
    left.reverse()
    right = [rec.edge_head]
    y = rec.edge_head
    while y != rec.right:
        y = po[y]
        if y < 0:
            raise ValueError(f"{rec.right} is not reachable right of edge "
                             f"({rec.edge_tail}, {rec.edge_head})")
        right.append(y)
    return WeightedSafePath(tuple(left + right), rec.flow)


opt_rep_enumerate = opt_rep


def expand_concise(records) -> list[WeightedSafePath]:
    return [p for r in records for p in r.expand()]


def expand_all(g: FlowGraph, records, forests=None):
    forests = forests or build_extension_forests(g)
    return [expand_optimal(g, r, forests) for r in records]
