"""Integer flow graphs on DAGs.

A flow graph is a directed acyclic graph whose vertices are ``0..n-1`` and
whose edges carry positive integer flow.  Every vertex that has both in- and
out-edges must conserve flow.  Parallel edges are merged by summing their
flows, so an edge is identified by its ``(u, v)`` pair.

Graphs are read from and written to the Catfish text format::

    #<graph id>
    <n>
    <u> <v> <flow>
    ...

Several graphs may be concatenated in one file.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Iterator, TextIO

import numpy as np


class GraphError(ValueError):
    """Base class for malformed or invalid graphs."""


class ParseError(GraphError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(GraphError):
    pass


class CycleError(ValidationError):
    pass


class ConservationError(ValidationError):
    def __init__(self, vertex: int, inflow: int, outflow: int):
        self.vertex = vertex
        self.inflow = inflow
        self.outflow = outflow
        super().__init__(
            f"flow not conserved at vertex {vertex}: in={inflow} out={outflow}")


class FlowGraph:
    """Immutable flow graph with CSR adjacency in both directions.

    Edge arrays ``tails``, ``heads`` and ``flows`` are sorted by ``(u, v)``, so
    the out-edges of ``u`` are the slice ``out_start[u]:out_start[u+1]``.  The
    in-edges of ``v`` are ``in_edges[in_start[v]:in_start[v+1]]`` (indices
    into the edge arrays, ordered by tail).
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int, int]] = (),
                 name: str = "", validate: bool = True):
        if n < 0:
            raise ValidationError("vertex count must be non-negative")
        self.n = int(n)
        self.name = name
        arr = np.array(list(edges), dtype=np.int64).reshape(-1, 3)
        self._init_arrays(arr[:, 0], arr[:, 1], arr[:, 2], validate)

    @classmethod
    def from_arrays(cls, n, tails, heads, flows, name="", validate=True):
        g = cls.__new__(cls)
        g.n = int(n)
        g.name = name
        g._init_arrays(np.asarray(tails, dtype=np.int64),
                       np.asarray(heads, dtype=np.int64),
                       np.asarray(flows, dtype=np.int64), validate)
        return g

    def _init_arrays(self, tails, heads, flows, validate):
        n = self.n
        if len(tails):
            if tails.min() < 0 or heads.min() < 0 or max(tails.max(), heads.max()) >= n:
                bad = np.flatnonzero((tails < 0) | (heads < 0) | (tails >= n) | (heads >= n))[0]
                raise ValidationError(
                    f"edge ({tails[bad]}, {heads[bad]}) has an endpoint outside 0..{n - 1}")
            if flows.min() <= 0:
                bad = int(np.argmin(flows))
                raise ValidationError(
                    f"edge ({tails[bad]}, {heads[bad]}) has non-positive flow {flows[bad]}")
            loops = np.flatnonzero(tails == heads)
            if len(loops):
                raise CycleError(f"self-loop at vertex {tails[loops[0]]}")
        # merge parallel edges
        key = tails * max(n, 1) + heads
        order = np.argsort(key, kind="stable")
        key = key[order]
        if len(key):
            first = np.ones(len(key), dtype=bool)
            first[1:] = key[1:] != key[:-1]
            starts = np.flatnonzero(first)
            flows = np.add.reduceat(flows[order], starts)
            tails = tails[order][starts]
            heads = heads[order][starts]
        self.tails, self.heads, self.flows = tails, heads, flows

        self.out_start = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(tails, minlength=n), out=self.out_start[1:])
        self.in_edges = np.lexsort((tails, heads)).astype(np.int64)
        self.in_start = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(heads, minlength=n), out=self.in_start[1:])
        self.f_out = np.zeros(n, dtype=np.int64)
        self.f_in = np.zeros(n, dtype=np.int64)
        np.add.at(self.f_out, tails, flows)
        np.add.at(self.f_in, heads, flows)
        self.topo = topological_order(self)
        self.pos = np.empty(n, dtype=np.int64)
        self.pos[self.topo] = np.arange(n, dtype=np.int64)
        self._edge_map = None
        if validate:
            self._check_conservation()

    def _check_conservation(self):
        indeg = np.diff(self.in_start)
        outdeg = np.diff(self.out_start)
        internal = (indeg > 0) & (outdeg > 0)
        bad = np.flatnonzero(internal & (self.f_in != self.f_out))
        if len(bad):
            v = int(bad[0])
            raise ConservationError(v, int(self.f_in[v]), int(self.f_out[v]))

    @property
    def m(self) -> int:
        return len(self.tails)

    def in_degree(self, v: int) -> int:
        return int(self.in_start[v + 1] - self.in_start[v])

    def out_degree(self, v: int) -> int:
        return int(self.out_start[v + 1] - self.out_start[v])

    def edges(self) -> Iterator[tuple[int, int, int]]:
        return zip(self.tails.tolist(), self.heads.tolist(), self.flows.tolist())

    def out_edges(self, u: int) -> list[tuple[int, int]]:
        s, e = self.out_start[u], self.out_start[u + 1]
        return list(zip(self.heads[s:e].tolist(), self.flows[s:e].tolist()))

    def in_edges_of(self, v: int) -> list[tuple[int, int]]:
        idx = self.in_edges[self.in_start[v]:self.in_start[v + 1]]
        return list(zip(self.tails[idx].tolist(), self.flows[idx].tolist()))

    def edge_map(self) -> dict[tuple[int, int], int]:
        if self._edge_map is None:
            self._edge_map = dict(zip(zip(self.tails.tolist(), self.heads.tolist()),
                                      self.flows.tolist()))
        return self._edge_map

    def flow(self, u: int, v: int) -> int:
        """Flow on edge (u, v); raises KeyError if absent."""
        try:
            return self.edge_map()[(u, v)]
        except KeyError:
            raise KeyError(f"no edge ({u}, {v})") from None

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edge_map()

    def sources(self) -> list[int]:
        return np.flatnonzero(np.diff(self.in_start) == 0).tolist()

    def sinks(self) -> list[int]:
        return np.flatnonzero(np.diff(self.out_start) == 0).tolist()

    def total_flow(self) -> int:
        """Flow leaving all sources."""
        src = np.diff(self.in_start) == 0
        return int(self.f_out[src].sum())

    def is_path(self, path) -> bool:
        em = self.edge_map()
        return len(path) >= 1 and all((a, b) in em for a, b in zip(path, path[1:]))

    def __repr__(self):
        return f"FlowGraph(name={self.name!r}, n={self.n}, m={self.m})"

    def __eq__(self, other):
        if not isinstance(other, FlowGraph):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self.tails, other.tails)
                and np.array_equal(self.heads, other.heads)
                and np.array_equal(self.flows, other.flows))

    __hash__ = None


def topological_order(g: FlowGraph) -> np.ndarray:
    """Kahn's algorithm, smallest vertex id first among ready vertices.

    Raises CycleError if the graph has a cycle.
    """
    n = g.n
    if g.m == 0 or bool(np.all(g.tails < g.heads)):
        return np.arange(n, dtype=np.int64)
    indeg = np.diff(g.in_start).tolist()
    heads = g.heads.tolist()
    ostart = g.out_start.tolist()
    ready = [v for v in range(n) if indeg[v] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        u = heapq.heappop(ready)
        order.append(u)
        for i in range(ostart[u], ostart[u + 1]):
            v = heads[i]
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(ready, v)
    if len(order) != n:
        stuck = min(v for v in range(n) if indeg[v] > 0)
        raise CycleError(f"graph has a cycle through vertex {stuck}")
    return np.array(order, dtype=np.int64)


# -- maximum edges ----------------------------------------------------------

@dataclass
class MaxEdgeIndex:
    """Per-vertex maximum in- and out-edges.

    ``in_tail[v]`` is the tail of the preferred max in-edge of ``v`` (the one
    whose tail comes first in topological order among those of maximum flow),
    or -1 if ``v`` has no in-edges.  ``in_unique[v]`` tells whether that
    maximum is strict.  The ``out_*`` arrays are the mirror image.
    """
    in_tail: np.ndarray
    in_flow: np.ndarray
    in_unique: np.ndarray
    out_head: np.ndarray
    out_flow: np.ndarray
    out_unique: np.ndarray

    def max_in(self, v: int):
        t = int(self.in_tail[v])
        if t < 0:
            return None
        return (t, v), int(self.in_flow[v]), bool(self.in_unique[v])

    def max_out(self, u: int):
        h = int(self.out_head[u])
        if h < 0:
            return None
        return (u, h), int(self.out_flow[u]), bool(self.out_unique[u])


def _max_by_group(n, key, far, flows, pos):
    tail = np.full(n, -1, dtype=np.int64)
    best = np.zeros(n, dtype=np.int64)
    unique = np.zeros(n, dtype=bool)
    if len(key) == 0:
        return tail, best, unique
    order = np.lexsort((pos[far], -flows, key))
    k = key[order]
    first = np.ones(len(k), dtype=bool)
    first[1:] = k[1:] != k[:-1]
    fi = order[first]
    tail[key[fi]] = far[fi]
    best[key[fi]] = flows[fi]
    # unique unless the runner-up in the same group has equal flow
    runner = np.flatnonzero(first) + 1
    ok = runner < len(k)
    ok[ok] = k[runner[ok]] == k[runner[ok] - 1]
    unique[key[fi]] = True
    tied = np.zeros(len(fi), dtype=bool)
    tied[ok] = flows[order[runner[ok]]] == flows[fi[ok]]
    unique[key[fi[tied]]] = False
    return tail, best, unique


def build_max_edge_index(g: FlowGraph) -> MaxEdgeIndex:
    it, if_, iu = _max_by_group(g.n, g.heads, g.tails, g.flows, g.pos)
    oh, of, ou = _max_by_group(g.n, g.tails, g.heads, g.flows, g.pos)
    return MaxEdgeIndex(it, if_, iu, oh, of, ou)


# -- funnels ----------------------------------------------------------------

def is_funnel(g: FlowGraph) -> bool:
    """True if no merge vertex reaches a split vertex.

    Funnels are exactly the flow graphs with a single flow decomposition.
    """
    indeg = np.diff(g.in_start).tolist()
    outdeg = np.diff(g.out_start).tolist()
    heads = g.heads.tolist()
    ostart = g.out_start.tolist()
    merged = [d > 1 for d in indeg]
    for u in g.topo.tolist():
        if merged[u]:
            if outdeg[u] > 1:
                return False
            for i in range(ostart[u], ostart[u + 1]):
                merged[heads[i]] = True
    return True


def funnel_vertex_ratio(g: FlowGraph) -> float:
    """Fraction of vertices with in-degree <= 1 or out-degree <= 1."""
    if g.n == 0:
        return 1.0
    indeg = np.diff(g.in_start)
    outdeg = np.diff(g.out_start)
    return float(np.count_nonzero((indeg <= 1) | (outdeg <= 1))) / g.n


# -- Catfish text format ----------------------------------------------------

def _parse_int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"{what} {tok!r} is not an integer", lineno) from None


def iter_graphs(lines: Iterable[str], validate: bool = True) -> Iterator[FlowGraph]:
    """Parse graphs one at a time from an iterable of text lines."""
    name = None
    n = None
    tails: list[int] = []
    heads: list[int] = []
    flows: list[int] = []
    header_line = 0

    def finish():
        if n is None:
            raise ParseError("graph header without vertex count", header_line)
        try:
            return FlowGraph.from_arrays(n, tails, heads, flows, name=name, validate=validate)
        except ValidationError as exc:
            exc.graph = name
            exc.args = (f"graph {name!r}: {exc}",)
            raise

    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if name is not None:
                yield finish()
            name = line[1:]
            n = None
            tails, heads, flows = [], [], []
            header_line = lineno
            continue
        if name is None:
            raise ParseError("data before first '#' header", lineno)
        toks = line.split()
        if n is None:
            if len(toks) != 1:
                raise ParseError("expected the vertex count", lineno)
            n = _parse_int(toks[0], lineno, "vertex count")
            if n < 0:
                raise ParseError("negative vertex count", lineno)
            continue
        if len(toks) != 3:
            raise ParseError(f"expected 'u v flow', got {len(toks)} fields", lineno)
        u = _parse_int(toks[0], lineno, "vertex")
        v = _parse_int(toks[1], lineno, "vertex")
        f = _parse_int(toks[2], lineno, "flow")
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"vertex out of range 0..{n - 1}", lineno)
        if f <= 0:
            raise ParseError(f"non-positive flow {f}", lineno)
        tails.append(u)
        heads.append(v)
        flows.append(f)
    if name is not None:
        yield finish()


def parse_graphs(text: str, validate: bool = True) -> list[FlowGraph]:
    return list(iter_graphs(text.splitlines(), validate=validate))


def read_graphs(path, validate: bool = True) -> list[FlowGraph]:
    with open(path) as fh:
        return list(iter_graphs(fh, validate=validate))


def write_graph(g: FlowGraph, fh: TextIO) -> None:
    fh.write(f"#{g.name}\n{g.n}\n")
    chunk = 65536
    t, h, f = g.tails, g.heads, g.flows
    for s in range(0, g.m, chunk):
        rows = zip(t[s:s + chunk].tolist(), h[s:s + chunk].tolist(), f[s:s + chunk].tolist())
        fh.write("".join(f"{a} {b} {c}\n" for a, b, c in rows))


def format_graphs(graphs: Iterable[FlowGraph]) -> str:
    import io
    buf = io.StringIO()
    for g in graphs:
        write_graph(g, buf)
    return buf.getvalue()


def write_graphs(graphs: Iterable[FlowGraph], path) -> None:
    with open(path, "w") as fh:
        for g in graphs:
            write_graph(g, fh)


def typed(values, code: str = "q"):
    """Compact ``array.array`` copy of a numpy vector, for fast scalar access."""
    from array import array
    dtype = {"q": np.int64, "i": np.int32, "b": np.int8}[code]
    return array(code, np.ascontiguousarray(values, dtype=dtype).tobytes())
