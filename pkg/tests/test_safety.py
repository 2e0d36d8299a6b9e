import numpy as np
import pytest
from hypothesis import given, settings

from safeflow.flowgraph import FlowGraph
from safeflow.records import WeightedSafePath
from safeflow.safety import (OracleGuardError, all_safe_paths_bruteforce,
                             candidate_flow_decomposition, con_rep, delta_extend,
                             enumerate_all_maximal_safe_paths_bruteforce,
                             enumerate_flow_decompositions, excess_flow, filter_subpaths, is_safe,
                             raw_rep, safe_by_decompositions, two_pointer_scan)

from conftest import V, sample_paths, flow_graphs, random_flow_graph, vs

S, A, X, T = 0, 1, 2, 3


def merge_graph():
    """s->a:5, x->a:2, a->t:7"""
    return FlowGraph(4, [(S, A, 5), (X, A, 2), (A, T, 7)])


def all_paths(g, min_edges=1):
    out = []

    def walk(p):
        if len(p) > min_edges:
            out.append(tuple(p))
        for v, _ in g.out_edges(p[-1]):
            walk(p + [v])
    for u in range(g.n):
        walk([u])
    return out


def excess_incoming(g, path):
    """The same excess computed from incoming flows."""
    total = g.flow(path[-2], path[-1])
    for i in range(1, len(path) - 1):
        total -= g.f_in[path[i]] - g.flow(path[i - 1], path[i])
    return total


# -- excess --------------------------------------------------------------------

def test_excess_single_edge():
    assert excess_flow(FlowGraph(2, [(0, 1, 5)]), (0, 1)) == 5


def test_excess_merge():
    assert excess_flow(merge_graph(), (S, A, T)) == 5


def test_excess_sample(sample):
    for p in sample_paths():
        assert excess_flow(sample, p.vertices) == 3


def test_excess_rejects_non_paths(sample):
    with pytest.raises(ValueError):
        excess_flow(sample, (V["a"],))
    with pytest.raises(ValueError):
        excess_flow(sample, (V["a"], V["d"]))


@settings(max_examples=100, deadline=None)
@given(flow_graphs(max_vertices=8))
def test_excess_formulas_agree(g):
    for p in all_paths(g):
        assert excess_flow(g, p) == excess_incoming(g, p)


# -- extension deltas ----------------------------------------------------------

def test_delta_right_by_only_out_edge():
    g = merge_graph()
    assert delta_extend(g, (X, A), "right", (A, T)) == 0


def test_delta_left_merge():
    g = merge_graph()
    assert delta_extend(g, (A, T), "left", (S, A)) == -2
    assert excess_flow(g, (A, T)) == 7
    assert excess_flow(g, (S, A, T)) == 5


@settings(max_examples=100, deadline=None)
@given(flow_graphs(max_vertices=8))
def test_delta_matches_excess_difference(g):
    for p in all_paths(g):
        for v, _ in g.out_edges(p[-1]):
            assert excess_flow(g, p + (v,)) - excess_flow(g, p) == \
                delta_extend(g, p, "right", (p[-1], v))
        for u, _ in g.in_edges_of(p[0]):  # (tail, flow)
            assert excess_flow(g, (u,) + p) - excess_flow(g, p) == \
                delta_extend(g, p, "left", (u, p[0]))


# -- safety --------------------------------------------------------------------

def test_single_edges_safe(sample):
    for u, v, _ in sample.edges():
        assert is_safe(sample, (u, v))


def test_sample_maximal_path_and_its_extensions(sample):
    p = vs("abcdef")
    assert is_safe(sample, p)
    assert excess_flow(sample, p) == 3
    assert not is_safe(sample, p + (V["g"],))
    assert not is_safe(sample, p + (V["h"],))


# -- candidate decomposition ---------------------------------------------------

def test_decomposition_single_path():
    g = FlowGraph(3, [(0, 1, 7), (1, 2, 7)])
    assert candidate_flow_decomposition(g) == [WeightedSafePath((0, 1, 2), 7)]


def test_decomposition_diamond():
    g = FlowGraph(4, [(0, 1, 3), (0, 2, 2), (1, 3, 3), (2, 3, 2)])
    assert sorted(candidate_flow_decomposition(g)) == [((0, 1, 3), 3), ((0, 2, 3), 2)]


@settings(max_examples=150, deadline=None)
@given(flow_graphs(max_vertices=12, max_paths=6))
def test_decomposition_superposition(g):
    acc = {}
    for p, w in candidate_flow_decomposition(g):
        assert w > 0
        assert p[0] in g.sources() and p[-1] in g.sinks()
        for e in zip(p, p[1:]):
            acc[e] = acc.get(e, 0) + w
    assert acc == g.edge_map()


# -- two-pointer scan ----------------------------------------------------------

def test_scan_funnel_path():
    g = FlowGraph(4, [(0, 1, 4), (1, 2, 4), (2, 3, 4)])
    assert two_pointer_scan(g, (0, 1, 2, 3)) == [((0, 1, 2, 3), 4)]


def test_scan_merge():
    assert two_pointer_scan(merge_graph(), (S, A, T)) == [((S, A, T), 5)]


def maximal_safe_subpaths(g, p):
    """Quadratic oracle: safe subpaths of p (>= 2 edges) not inside another."""
    L = len(p)
    safe = [(i, j) for i in range(L) for j in range(i + 2, L) if is_safe(g, p[i:j + 1])]
    keep = [(i, j) for i, j in safe
            if not any((a, b) != (i, j) and a <= i and j <= b for a, b in safe)]
    return [(p[i:j + 1], excess_flow(g, p[i:j + 1])) for i, j in sorted(keep)]


@settings(max_examples=150, deadline=None)
@given(flow_graphs(max_vertices=12, max_paths=5))
def test_scan_matches_quadratic_oracle(g):
    for p, _ in candidate_flow_decomposition(g):
        assert [tuple(x) for x in two_pointer_scan(g, p)] == maximal_safe_subpaths(g, p)


# -- subpath filter ------------------------------------------------------------

def wp(*words):
    return [WeightedSafePath(tuple(w), 1) for w in words]


def test_filter_duplicates():
    assert filter_subpaths(wp("abc", "abc")) == wp("abc")


def test_filter_suffix():
    assert filter_subpaths(wp("abc", "bc")) == wp("abc")


def test_filter_overlap_kept():
    assert filter_subpaths(wp("abc", "bcd")) == wp("abc", "bcd")


def test_filter_inner_and_prefix():
    assert filter_subpaths(wp("ab", "xabcy", "bc", "xa", "q")) == wp("xabcy", "q")


# -- brute-force oracles -------------------------------------------------------

def test_bruteforce_sample(sample):
    assert maximal(sample) == sample_paths()


def maximal(g):
    return sorted(enumerate_all_maximal_safe_paths_bruteforce(g))


def test_bruteforce_funnel_gives_source_sink_paths():
    g = FlowGraph(5, [(0, 1, 3), (0, 2, 2), (1, 3, 3), (2, 3, 2), (3, 4, 5)])
    assert maximal(g) == [((0, 1, 3, 4), 3), ((0, 2, 3, 4), 2)]


def test_bruteforce_guard():
    g = FlowGraph(70, [(i, i + 1, 1) for i in range(69)])
    with pytest.raises(OracleGuardError):
        maximal(g)


def test_all_safe_paths_subset_closed(sample):
    safe = set(all_safe_paths_bruteforce(sample))
    for p in safe:
        if len(p) > 2:
            assert p[1:] in safe and p[:-1] in safe


def test_raw_rep_sample(sample):
    assert sorted(raw_rep(sample)) == sample_paths()


@settings(max_examples=300, deadline=None)
@given(flow_graphs(max_vertices=14, max_paths=6, max_flow=1000))
def test_raw_rep_matches_bruteforce(g):
    assert sorted(raw_rep(g)) == maximal(g)


@settings(max_examples=100, deadline=None)
@given(flow_graphs(max_vertices=14, max_paths=6))
def test_con_rep_expands_to_raw_rep(g):
    got = sorted(p for r in con_rep(g) for p in r.expand())
    assert got == sorted(raw_rep(g))


# -- exhaustive decompositions -------------------------------------------------

def test_decompositions_single_path():
    assert len(enumerate_flow_decompositions(FlowGraph(3, [(0, 1, 4), (1, 2, 4)]))) == 1


def test_decompositions_equal_split_diamond():
    g = FlowGraph(4, [(0, 1, 1), (0, 2, 1), (1, 3, 1), (2, 3, 1)])
    assert len(enumerate_flow_decompositions(g)) == 1


def test_decompositions_crossing():
    # two sources, two sinks through one vertex: flows 1 + 1 can pair up two ways
    g = FlowGraph(5, [(0, 2, 1), (1, 2, 1), (2, 3, 1), (2, 4, 1)])
    assert len(enumerate_flow_decompositions(g)) == 2


def test_decompositions_guard():
    g = FlowGraph(2, [(0, 1, 100)])
    with pytest.raises(OracleGuardError):
        enumerate_flow_decompositions(g)


def test_safety_characterization_fixed_seeds():
    rng = np.random.default_rng(7)
    checked = 0
    while checked < 60:
        g, _ = random_flow_graph(rng, int(rng.integers(1, 4)), 6, 5, 6, multi_end=True)
        if g.m > 12 or g.total_flow() > 32:
            continue
        decs = enumerate_flow_decompositions(g)
        for p in all_paths(g):
            assert is_safe(g, p) == safe_by_decompositions(g, p, decs)
        checked += 1
