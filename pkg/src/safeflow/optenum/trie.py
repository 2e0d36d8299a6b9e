"""Output-sensitive enumeration of maximal safe paths with shared tries.

Vertices are processed in topological order.  Every vertex ``u`` owns a trie
whose root is ``u`` and whose root-to-leaf paths, read backwards, are the
current candidate safe paths ending at ``u``.  Each candidate carries its
excess.  When ``u`` is done, its trie is hung below the root of the trie of
``v*``, the head of the preferred max out-edge of ``u``, so suffixes are
shared instead of copied.  Candidates whose excess would drop to zero along
``(u, v*)`` are reported and their unusable prefix is pruned off the left.

Out-edges of ``u`` other than ``(u, v*)`` start a fresh copy: the longest
safe path ending in that edge runs backwards from ``u`` along unique max
in-edges, and that chain is copied into the trie of the edge head.  These
copies make up for the sharing and their total size is bounded by the output.

``opt_raw_enumerate`` yields every maximal safe path in full.
``opt_concise`` keeps the same trie walk but groups overlapping paths on one
carrier path, which gives an output linear in the size of the graph plus the
number of paths.
"""
from __future__ import annotations

from array import array

from ..flowgraph import FlowGraph, MaxEdgeIndex, build_max_edge_index, typed
from ..records import ConciseRecord, Interval, WeightedSafePath


class _Forest:
    """Trie nodes for all vertices, stored in parallel lists.

    ``maxchild[x]`` is the child of ``x`` whose vertex is the preferred max
    in-neighbour of ``x``'s vertex; it is the only child lookup we need.
    """

    __slots__ = ("vert", "parent", "nchild", "maxchild", "eflow", "free", "maxin", "created")

    def __init__(self, maxin):
        self.vert = array("i")
        self.parent = array("i")
        self.nchild = array("i")
        self.maxchild = array("i")
        self.eflow = array("q")
        self.free = []
        self.maxin = maxin
        self.created = 0

    def new(self, v, parent, flow):
        self.created += 1
        if self.free:
            x = self.free.pop()
            self.vert[x] = v
            self.parent[x] = parent
            self.nchild[x] = 0
            self.maxchild[x] = -1
            self.eflow[x] = flow
        else:
            x = len(self.vert)
            self.vert.append(v)
            self.parent.append(parent)
            self.nchild.append(0)
            self.maxchild.append(-1)
            self.eflow.append(flow)
        if parent >= 0:
            self.attach(x, parent)
        return x

    def attach(self, x, parent):
        self.parent[x] = parent
        self.nchild[parent] += 1
        if self.vert[x] == self.maxin[self.vert[parent]]:
            self.maxchild[parent] = x

    def remove_leaf(self, x):
        y = self.parent[x]
        self.nchild[y] -= 1
        if self.maxchild[y] == x:
            self.maxchild[y] = -1
        self.free.append(x)
        return y

    def walk_up(self, x, stop):
        """Vertices from node ``x`` up to and including node ``stop``."""
        vert, parent = self.vert, self.parent
        out = [vert[x]]
        while x != stop:
            x = parent[x]
            out.append(vert[x])
        return out


class _Setup:
    """Plain-list views of the graph used by both trie enumerators."""

    def __init__(self, g: FlowGraph, index: MaxEdgeIndex | None):
        index = index or build_max_edge_index(g)
        self.heads = typed(g.heads, "i")
        self.flows = typed(g.flows)
        self.ostart = typed(g.out_start)
        self.f_in = typed(g.f_in)
        self.f_out = typed(g.f_out)
        self.maxin = typed(index.in_tail, "i")
        self.maxin_flow = typed(index.in_flow)
        self.maxout = typed(index.out_head, "i")
        self.topo = typed(g.topo, "i")


def _copy_chain(T, f_in, maxin_flow, ru, u, v, f, rv):
    """Copy the longest safe chain ending in edge (u, v) into T_v.

    Returns the new leaf, its vertex's node in T_u where the walk stopped,
    and the excess.
    """
    vert, nchild, maxchild = T.vert, T.nchild, T.maxchild
    c = T.new(u, rv, f)
    x = ru
    fx = f
    while nchild[x]:
        w = vert[x]
        nf = fx - f_in[w] + maxin_flow[w]
        if nf <= 0:
            break
        y = maxchild[x]
        fx = nf
        c = T.new(vert[y], c, maxin_flow[w])
        x = y
    return c, x, fx


def opt_raw_enumerate(g: FlowGraph, index: MaxEdgeIndex | None = None,
                      counters: dict | None = None):
    """Yield every maximal safe path (at least two edges) with its excess.

    If ``counters`` is given, ``counters["nodes"]`` receives the number of
    trie nodes created once the generator is exhausted.
    """
    S = _Setup(g, index)
    heads, flows, ostart = S.heads, S.flows, S.ostart
    f_in, f_out, maxin_flow, maxout = S.f_in, S.f_out, S.maxin_flow, S.maxout
    T = _Forest(S.maxin)
    vert, parent, nchild, eflow = T.vert, T.parent, T.nchild, T.eflow
    n = g.n
    root = array("i", [-1]) * n
    entries = [None] * n

    for u in S.topo:
        ru = root[u]
        if ru < 0:
            ru = root[u] = T.new(u, -1, 0)
        ents = entries[u]
        entries[u] = None
        vs = maxout[u] if ents else -1
        for i in range(ostart[u], ostart[u + 1]):
            v = heads[i]
            if v == vs:
                fvs = flows[i]
                continue
            rv = root[v]
            if rv < 0:
                rv = root[v] = T.new(v, -1, 0)
            leaf, _, fx = _copy_chain(T, f_in, maxin_flow, ru, u, v, flows[i], rv)
            if entries[v] is None:
                entries[v] = []
            entries[v].append((leaf, fx))
        if not ents:
            continue
        if vs >= 0:
            rv = root[vs]
            if rv < 0:
                rv = root[vs] = T.new(vs, -1, 0)
            eflow[ru] = fvs
            T.attach(ru, rv)
            loss = f_out[u] - fvs
            nxt = entries[vs]
            if nxt is None:
                nxt = entries[vs] = []
        for leaf, fx in ents:
            if vs >= 0 and fx > loss:
                nxt.append((leaf, fx - loss))
                continue
            if parent[leaf] != ru:
                yield WeightedSafePath(tuple(T.walk_up(leaf, ru)), fx)
            if vs < 0:
                continue
            x = leaf
            fx -= loss
            while fx <= 0 and x != ru and not nchild[x]:
                y = T.remove_leaf(x)
                fx += f_in[vert[y]] - eflow[x]
                x = y
            if fx > 0 and not nchild[x]:
                nxt.append((x, fx))
    if counters is not None:
        counters["nodes"] = T.created


_NEVER = float("-inf")


class _Carrier:
    __slots__ = ("verts", "ivs", "leaf")

    def __init__(self, verts, ivs, leaf):
        self.verts = verts
        self.ivs = ivs
        self.leaf = leaf


def _record(verts, ivs):
    return ConciseRecord(tuple(verts), tuple(Interval(*iv) for iv in ivs))


def opt_concise(g: FlowGraph, index: MaxEdgeIndex | None = None):
    """Yield concise records covering every maximal safe path exactly once.

    A carrier grows while its newest interval keeps positive excess; the
    vertices dropped off its left end are committed to the carrier.  Fresh
    chains started at the current vertex are marked on the trie node where
    they branch off, and a carrier that would otherwise end there is merged
    into the fresh one instead.
    """
    S = _Setup(g, index)
    heads, flows, ostart = S.heads, S.flows, S.ostart
    f_in, f_out, maxin_flow, maxout = S.f_in, S.f_out, S.maxin_flow, S.maxout
    T = _Forest(S.maxin)
    vert, parent, nchild, eflow = T.vert, T.parent, T.nchild, T.eflow
    n = g.n
    root = array("i", [-1]) * n
    pending = [None] * n

    for u in S.topo:
        ru = root[u]
        if ru < 0:
            ru = root[u] = T.new(u, -1, 0)
        cars = pending[u]
        pending[u] = None
        vs = maxout[u] if cars else -1
        mark = {}
        for i in range(ostart[u], ostart[u + 1]):
            v = heads[i]
            if v == vs:
                fvs = flows[i]
                continue
            rv = root[v]
            if rv < 0:
                rv = root[v] = T.new(v, -1, 0)
            leaf, x, fx = _copy_chain(T, f_in, maxin_flow, ru, u, v, flows[i], rv)
            car = _Carrier([], [[vert[x], v, fx]], leaf)
            if pending[v] is None:
                pending[v] = []
            pending[v].append(car)
            mark.setdefault(x, []).append(car)
        if not cars:
            continue
        if vs >= 0:
            rv = root[vs]
            if rv < 0:
                rv = root[vs] = T.new(vs, -1, 0)
            eflow[ru] = fvs
            T.attach(ru, rv)
            loss = f_out[u] - fvs
            nxt = pending[vs]
            if nxt is None:
                nxt = pending[vs] = []
        for car in cars:
            last = car.ivs[-1]
            x = car.leaf
            fx = last[2] - loss if vs >= 0 else _NEVER
            removed = []
            while fx <= 0 and x != ru and not mark.get(x):
                if nchild[x]:
                    break
                removed.append(vert[x])
                y = T.remove_leaf(x)
                fx += f_in[vert[y]] - eflow[x]
                x = y
            if removed:
                car.verts.extend(removed)
                if x == ru and len(removed) == 1:
                    # the last interval was a single edge, which is never maximal
                    car.ivs.pop()
                    if car.ivs:
                        yield _record(car.verts, car.ivs)
                    car = _Carrier([], [], -1)
            if fx > 0 and not nchild[x]:
                if removed or not car.ivs:
                    car.ivs.append([vert[x], vs, fx])
                else:
                    last[1] = vs
                    last[2] = fx
                car.leaf = x
                nxt.append(car)
            elif mark.get(x):
                fresh = mark[x].pop()
                fresh.verts = car.verts
                fresh.ivs = car.ivs + fresh.ivs
            elif car.ivs:
                yield _record(car.verts + T.walk_up(x, ru), car.ivs)
