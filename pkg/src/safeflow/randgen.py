"""Random flow graphs built by superimposing weighted source-to-sink paths.

Vertex ids are already a topological order: vertex 0 is the source, vertex
``n - 1`` the sink, and every path visits vertices in increasing id.

uniform
    each path picks ``d - 2`` distinct internal vertices uniformly.
power-law
    internal vertices are drawn without replacement with weight
    ``(deg + 1) ** 3``, where ``deg`` counts the edges already touching a
    vertex, so hubs form quickly.
improved
    a backbone ``0 -> 1 -> ... -> n-1`` is laid down first.  Consecutive
    chosen vertices of a path are then joined either by a direct chord, or,
    with probability ``p ** 2``, by the backbone segment between them.  This
    produces the long funnel-like stretches seen in real splice graphs.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .flowgraph import FlowGraph

DEFAULT_FUNNEL_P = 0.81


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class GenParams:
    n: int
    k: int
    d: int
    p: float = DEFAULT_FUNNEL_P
    seed: int = 0
    flow_range: tuple[int, int] = (1, 1000)
    base_flow: int = 1

    def validate(self):
        if self.n < 2 or self.d < 2:
            raise ParameterError("need n >= 2 and d >= 2")
        if self.d > self.n:
            raise ParameterError(f"path length d={self.d} exceeds vertex count n={self.n}")
        if self.k < 1:
            raise ParameterError("need k >= 1")
        if not 0.0 <= self.p <= 1.0:
            raise ParameterError("p must lie in [0, 1]")
        lo, hi = self.flow_range
        if lo < 1 or hi < lo:
            raise ParameterError("flow range must satisfy 1 <= min <= max")
        if self.base_flow < 1:
            raise ParameterError("base flow must be positive")


def _rng(params: GenParams, stream: int):
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([params.seed, stream])))


def _flows(params, rng):
    lo, hi = params.flow_range
    return rng.integers(lo, hi + 1, size=params.k).tolist()


def _build(n, tails, heads, flows, name):
    return FlowGraph.from_arrays(n, np.concatenate(tails), np.concatenate(heads),
                                 np.concatenate(flows), name=name)


def _superimpose(params, paths, weights, name):
    tails, heads, flows = [], [], []
    for p, w in zip(paths, weights):
        p = np.asarray(p, dtype=np.int64)
        tails.append(p[:-1])
        heads.append(p[1:])
        flows.append(np.full(len(p) - 1, w, dtype=np.int64))
    return _build(params.n, tails, heads, flows, name)


def _result(g, paths, weights, ledger):
    if ledger:
        return g, [(tuple(p), w) for p, w in zip(paths, weights)]
    return g


def uniform_paths(params: GenParams):
    params.validate()
    rng = _rng(params, 0)
    n, d = params.n, params.d
    paths = []
    for _ in range(params.k):
        mid = np.sort(rng.choice(np.arange(1, n - 1), size=d - 2, replace=False)) \
            if d > 2 else np.empty(0, dtype=np.int64)
        paths.append([0] + mid.tolist() + [n - 1])
    return paths, _flows(params, _rng(params, 1))


def gen_uniform(params: GenParams, ledger: bool = False):
    """Superposition of k paths with uniformly chosen internal vertices.

    With ``ledger=True`` also returns the generating ``(path, flow)`` list.
    """
    paths, weights = uniform_paths(params)
    g = _superimpose(params, paths, weights, f"uniform n={params.n} k={params.k} d={params.d}")
    return _result(g, paths, weights, ledger)


def power_law_paths(params: GenParams):
    params.validate()
    rng = _rng(params, 0)
    n, d = params.n, params.d
    deg = np.zeros(n, dtype=np.float64)
    inner = np.arange(1, n - 1)
    paths = []
    for _ in range(params.k):
        if d > 2:
            w = (deg[1:n - 1] + 1.0) ** 3
            mid = np.sort(rng.choice(inner, size=d - 2, replace=False, p=w / w.sum()))
            deg[mid] += 2
        else:
            mid = np.empty(0, dtype=np.int64)
        deg[0] += 1
        deg[n - 1] += 1
        paths.append([0] + mid.tolist() + [n - 1])
    return paths, _flows(params, _rng(params, 1))


def gen_power_law(params: GenParams, ledger: bool = False):
    """Like gen_uniform, but vertices already on many paths are preferred."""
    paths, weights = power_law_paths(params)
    g = _superimpose(params, paths, weights, f"powerlaw n={params.n} k={params.k} d={params.d}")
    return _result(g, paths, weights, ledger)


def gen_improved(params: GenParams, ledger: bool = False):
    """Backbone path plus k paths joined by chords or backbone segments.

    The ledger lists the generating paths in full, backbone included (first),
    with routed segments expanded vertex by vertex.
    """
    paths, weights = uniform_paths(params)
    n = params.n
    route = _rng(params, 2)
    p2 = params.p * params.p
    # backbone flow accumulates through a difference array
    diff = np.zeros(n, dtype=np.int64)
    diff[0] += params.base_flow
    diff[n - 1] -= params.base_flow
    tails, heads, flows = [], [], []
    full = []
    for p, w in zip(paths, weights):
        p = np.asarray(p, dtype=np.int64)
        a, b = p[:-1], p[1:]
        on_bone = route.random(len(a)) < p2
        on_bone |= (b - a) == 1
        np.add.at(diff, a[on_bone], w)
        np.add.at(diff, b[on_bone], -w)
        chord = ~on_bone
        tails.append(a[chord])
        heads.append(b[chord])
        flows.append(np.full(int(chord.sum()), w, dtype=np.int64))
        if ledger:
            seq = [int(p[0])]
            for x, y, bone in zip(a.tolist(), b.tolist(), on_bone.tolist()):
                seq.extend(range(x + 1, y + 1) if bone else [y])
            full.append(seq)
    bone = np.cumsum(diff)[:-1]
    tails.append(np.arange(n - 1, dtype=np.int64))
    heads.append(np.arange(1, n, dtype=np.int64))
    flows.append(bone)
    g = _build(n, tails, heads, flows,
               f"improved n={n} k={params.k} d={params.d} p={params.p}")
    if ledger:
        return g, [(tuple(range(n)), params.base_flow)] + \
            [(tuple(s), w) for s, w in zip(full, weights)]
    return g


GENERATORS = {"uniform": gen_uniform, "powerlaw": gen_power_law, "improved": gen_improved}


def generate(model: str, params: GenParams, ledger: bool = False):
    try:
        fn = GENERATORS[model]
    except KeyError:
        raise ParameterError(f"unknown model {model!r}; choose from {sorted(GENERATORS)}") from None
    return fn(params, ledger=ledger)
