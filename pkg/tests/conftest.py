import sys

import numpy as np
import pytest
from hypothesis import strategies as st

from safeflow import FlowGraph
from safeflow.records import ConciseRecord, Interval, OptimalRecord, WeightedSafePath

LABELS = list("abcdefghijkl")
V = {c: i for i, c in enumerate(LABELS)}

SAMPLE_EDGES = "ab3 ac6 bc3 cd9 de9 ef9 fg6 fh3 gh6 hi9 ij9 jk3 jl6 kl3".split()

# the five maximal safe paths of the running example, all with excess 3
SAMPLE_SAFE = ["abcdef", "cdefhij", "acdefghij", "cdefghijl", "hijkl"]


def vs(word):
    return tuple(V[c] for c in word)


def sample_graph():
    return FlowGraph(12, [(V[e[0]], V[e[1]], int(e[2:])) for e in SAMPLE_EDGES], name="sample")


def sample_paths():
    return sorted(WeightedSafePath(vs(w), 3) for w in SAMPLE_SAFE)


def old_concise_listed():
    """Carriers and intervals as produced by the greedy-decomposition pipeline."""
    return [
        ConciseRecord(vs("abcdefhij"), (Interval(V["a"], V["f"], 3), Interval(V["c"], V["j"], 3))),
        ConciseRecord(vs("acdefghijl"), (Interval(V["a"], V["j"], 3), Interval(V["c"], V["l"], 3))),
        ConciseRecord(vs("hijkl"), (Interval(V["h"], V["l"], 3),)),
    ]


def four_interval_record():
    """Carrier a..j with overlapping intervals a-c, b-e, e-g, f-j."""
    return ConciseRecord(vs("abcdefghij"), (
        Interval(V["a"], V["c"], 2), Interval(V["b"], V["e"], 2),
        Interval(V["e"], V["g"], 2), Interval(V["f"], V["j"], 2)))


@pytest.fixture
def sample():
    return sample_graph()


@pytest.fixture
def labels():
    return LABELS


def random_flow_graph(rng, n_paths, n_vertices, path_len, max_flow, multi_end=False):
    """Superposition of random increasing paths; returns (graph, paths)."""
    paths = []
    for _ in range(n_paths):
        d = int(rng.integers(2, path_len + 1))
        # a few dedicated sources and sinks keep every inner vertex balanced
        ends = min(2, (n_vertices - 2) // 2) if multi_end else 0
        src = int(rng.integers(0, ends + 1))
        dst = n_vertices - 1 - int(rng.integers(0, ends + 1))
        inner = np.arange(ends + 1, n_vertices - 1 - ends)
        mid = np.sort(rng.choice(inner, size=min(d - 2, len(inner)), replace=False))
        seq = np.concatenate([[src], mid, [dst]])
        paths.append((tuple(int(x) for x in seq), int(rng.integers(1, max_flow + 1))))
    edges = {}
    for p, w in paths:
        for a, b in zip(p, p[1:]):
            edges[(a, b)] = edges.get((a, b), 0) + w
    g = FlowGraph(n_vertices, [(a, b, f) for (a, b), f in edges.items()], name="rand")
    return g, paths


@st.composite
def flow_graphs(draw, max_vertices=10, max_paths=4, max_flow=20, multi_end=True):
    seed = draw(st.integers(0, 2**32 - 1))
    n = draw(st.integers(2, max_vertices))
    k = draw(st.integers(1, max_paths))
    rng = np.random.default_rng(seed)
    g, _ = random_flow_graph(rng, k, n, n, max_flow, multi_end=multi_end)
    return g


def opt_rec(l, x, y, r, f, trivial):
    return OptimalRecord(V[l], V[x], V[y], V[r], f, trivial)


def pytest_terminal_summary(terminalreporter):
    for name, mod in list(sys.modules.items()):
        if name.endswith("test_acceptance") and getattr(mod, "REPORT", None):
            terminalreporter.section("acceptance criteria")
            for line in sorted(mod.REPORT):
                terminalreporter.write_line(line)
