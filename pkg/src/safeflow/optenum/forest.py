"""Forests of unique maximum edges with level-ancestor queries.

In the in-forest every vertex points to the tail of its unique max in-edge
(roots have none, or a tied maximum).  Walking up the in-forest from ``v`` is
therefore the only way a safe path ending at ``v`` can be extended to the
left without losing all of its excess in one step; the out-forest plays the
same role to the right.

Each node stores the cumulative loss from the root: walking from ``u`` up to
an ancestor ``a`` costs ``cum[u] - cum[a]`` of excess.  Jump pointers give
``O(log n)`` searches for the farthest affordable ancestor.
"""
from __future__ import annotations

import numpy as np

from ..flowgraph import FlowGraph, MaxEdgeIndex, build_max_edge_index, typed


class MaxEdgeForest:
    def __init__(self, parent: np.ndarray, local_loss: np.ndarray, edge_flow: np.ndarray):
        n = len(parent)
        self.n = n
        is_root = parent < 0
        anc = np.where(is_root, np.arange(n), parent)
        cum = np.where(is_root, 0, local_loss).astype(np.int64)
        depth = (~is_root).astype(np.int64)
        rows = [anc]
        # pointer doubling: after round k, anc covers 2^(k+1) steps
        while n and bool(np.any(anc[anc] != anc)):
            cum = cum + cum[anc]
            depth = depth + depth[anc]
            anc = anc[anc]
            rows.append(anc)
        self.parent = typed(parent, "i")
        self.cum = typed(cum)
        self.depth = typed(depth, "i")
        self.edge_flow = typed(edge_flow)
        self.jump = [typed(r, "i") for r in rows]

    def is_root(self, u: int) -> bool:
        return self.parent[u] < 0

    def ancestor(self, u: int, k: int) -> int:
        """The k-th ancestor of u (k <= depth[u])."""
        if k > self.depth[u]:
            raise ValueError(f"vertex {u} has depth {self.depth[u]} < {k}")
        b = 0
        while k:
            if k & 1:
                u = self.jump[b][u]
            k >>= 1
            b += 1
        return u

    def level_ancestor(self, u: int, d: int) -> int:
        """Ancestor of u at depth d."""
        return self.ancestor(u, self.depth[u] - d)

    def reach(self, u: int, excess: int) -> int:
        """Farthest ancestor a of u with cum[u] - cum[a] < excess."""
        cum = self.cum
        limit = cum[u] - excess
        p = self.parent[u]
        if p < 0 or cum[p] <= limit:
            return u
        x = u
        for row in reversed(self.jump):
            a = row[x]
            if cum[a] > limit:
                x = a
        return x

    def deepest_safe_below(self, y: int, r: int) -> int:
        """Deepest node q on the path from y down to r with a safe path y..q.

        The path from y to q (walking down the forest) keeps excess
        ``edge_flow[q] - (cum[parent[q]] - cum[y])``.  Requires ``y`` to be a
        proper ancestor of ``r``.
        """
        cum, parent, depth, ef = self.cum, self.parent, self.depth, self.edge_flow
        dy = depth[y]
        if depth[r] <= dy:
            raise ValueError(f"{y} is not a proper ancestor of {r}")
        cy = cum[y]
        if ef[r] - (cum[parent[r]] - cy) > 0:
            return r
        x = r
        # find the shallowest unsafe node below y on the spine, then step up
        for row in reversed(self.jump):
            a = row[x]
            if depth[a] > dy and ef[a] - (cum[parent[a]] - cy) <= 0:
                x = a
        return parent[x]


def build_extension_forests(g: FlowGraph, index: MaxEdgeIndex | None = None):
    """In-forest and out-forest of unique maximum edges."""
    index = index or build_max_edge_index(g)
    par_i = np.where(index.in_unique, index.in_tail, -1)
    loss_i = g.f_in - index.in_flow
    par_o = np.where(index.out_unique, index.out_head, -1)
    loss_o = g.f_out - index.out_flow
    fi = MaxEdgeForest(par_i, loss_i, index.in_flow)
    fo = MaxEdgeForest(par_o, loss_o, index.out_flow)
    return fi, fo


def left_extend(fi: MaxEdgeForest, u: int, excess: int) -> int:
    """Farthest in-forest ancestor of u reachable while keeping excess positive."""
    return fi.reach(u, excess)


def right_extend_o(fo: MaxEdgeForest, v: int, excess: int) -> int:
    """Farthest out-forest ancestor of v reachable while keeping excess positive."""
    return fo.reach(v, excess)


def right_extend_i(fi: MaxEdgeForest, y: int, r: int) -> int:
    """Deepest vertex q between y and its descendant r with y..q safe."""
    if y == r:
        return y
    return fi.deepest_safe_below(y, r)
