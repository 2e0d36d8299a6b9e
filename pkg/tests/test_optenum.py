import numpy as np
import pytest
from hypothesis import given, settings

from safeflow.flowgraph import FlowGraph, build_max_edge_index
from safeflow.optenum import (MaxEdgeForest, build_extension_forests, expand_all, expand_concise,
                              expand_optimal, left_extend, opt_concise, opt_raw_enumerate,
                              opt_rep, opt_rep_enumerate, right_extend_i, right_extend_o)
from safeflow.records import ConciseRecord, Interval
from safeflow.safety import (delta_extend, enumerate_all_maximal_safe_paths_bruteforce,
                             excess_flow, raw_rep)

from conftest import V, sample_paths, flow_graphs, opt_rec, random_flow_graph, vs


def funnel():
    # two source-to-sink paths sharing the last edge
    return FlowGraph(5, [(0, 1, 3), (0, 2, 2), (1, 3, 3), (2, 3, 2), (3, 4, 5)])


# -- forests -------------------------------------------------------------------

def test_forest_of_single_path():
    g = FlowGraph(4, [(0, 1, 2), (1, 2, 2), (2, 3, 2)])
    fi, fo = build_extension_forests(g)
    assert list(fi.parent) == [-1, 0, 1, 2]
    assert list(fo.parent) == [1, 2, 3, -1]
    assert list(fi.cum) == [0, 0, 0, 0]
    assert list(fo.cum) == [0, 0, 0, 0]


def test_forest_loss_at_merge():
    s, a, x, t = range(4)
    g = FlowGraph(4, [(s, a, 5), (x, a, 2), (a, t, 7)])
    fi, _ = build_extension_forests(g)
    assert fi.parent[a] == s
    assert fi.cum[a] - fi.cum[s] == 2


def test_forest_tie_has_no_parent():
    g = FlowGraph(4, [(0, 2, 3), (1, 2, 3), (2, 3, 6)])
    fi, _ = build_extension_forests(g)
    assert fi.parent[2] == -1


def random_forest(rng, n):
    parent = np.full(n, -1)
    loss = rng.integers(0, 4, size=n)
    flow = rng.integers(1, 8, size=n)
    for v in range(1, n):
        if rng.random() < 0.85:
            p = parent[v] = rng.integers(0, v)
            # as in a flow graph: the edge leaving p carries at most p's inflow
            flow[v] = rng.integers(1, flow[p] + loss[p] + 1)
    return MaxEdgeForest(parent, loss, flow), parent, loss, flow


def chain(parent, u):
    out = [u]
    while parent[out[-1]] >= 0:
        out.append(int(parent[out[-1]]))
    return out


@pytest.mark.parametrize("seed", range(20))
def test_level_ancestor_matches_walk(seed):
    rng = np.random.default_rng(seed)
    F, parent, _, _ = random_forest(rng, 60)
    for u in range(60):
        up = chain(parent, u)
        assert F.depth[u] == len(up) - 1
        for k in range(len(up)):
            assert F.ancestor(u, k) == up[k]
            assert F.level_ancestor(u, F.depth[u] - k) == up[k]
        with pytest.raises(ValueError):
            F.ancestor(u, len(up))


@pytest.mark.parametrize("seed", range(20))
def test_reach_matches_walk(seed):
    rng = np.random.default_rng(100 + seed)
    F, parent, loss, _ = random_forest(rng, 60)
    for u in range(60):
        for excess in range(1, 12):
            x, spent = u, 0
            while parent[x] >= 0 and spent + loss[x] < excess:
                spent += loss[x]
                x = int(parent[x])
            assert left_extend(F, u, excess) == x
            assert right_extend_o(F, u, excess) == x


@pytest.mark.parametrize("seed", range(20))
def test_deepest_safe_below_matches_scan(seed):
    rng = np.random.default_rng(200 + seed)
    F, parent, loss, flow = random_forest(rng, 60)
    for r in range(60):
        up = chain(parent, r)
        for j in range(1, len(up)):
            y = up[j]
            # walk down from y; q is kept while y..q stays safe
            spine = list(reversed(up[:j]))
            best, spent = y, 0
            for q in spine:
                # entering q: flow of edge into q minus losses at inner vertices
                if flow[q] - spent <= 0:
                    break
                best = q
                spent += loss[q]
            assert right_extend_i(F, y, r) == best
        assert right_extend_i(F, r, r) == r


def test_right_extend_i_on_funnel_path_reaches_leaf():
    g = FlowGraph(4, [(0, 1, 2), (1, 2, 2), (2, 3, 2)])
    fi, _ = build_extension_forests(g)
    assert right_extend_i(fi, 0, 3) == 3


def test_reach_extremes():
    g = FlowGraph(4, [(0, 1, 2), (1, 2, 2), (2, 3, 2)])
    fi, _ = build_extension_forests(g)
    assert left_extend(fi, 3, 10**9) == 0
    s, a, x, t = range(4)
    h = FlowGraph(4, [(s, a, 5), (x, a, 2), (a, t, 7)])
    hi, _ = build_extension_forests(h)
    assert left_extend(hi, a, 1) == a


@settings(max_examples=100, deadline=None)
@given(flow_graphs(max_vertices=14, max_paths=6))
def test_cum_loss_monotone(g):
    for F in build_extension_forests(g):
        for u in range(g.n):
            p = F.parent[u]
            if p >= 0:
                assert F.cum[u] >= F.cum[p]
                assert F.depth[u] == F.depth[p] + 1


# -- the running example ----------------------------------------------------------

def test_opt_raw_sample(sample):
    assert sorted(opt_raw_enumerate(sample)) == sample_paths()


def test_opt_concise_sample(sample):
    recs = list(opt_concise(sample))
    assert sorted(p for r in recs for p in r.expand()) == sample_paths()
    assert recs == [
        ConciseRecord(vs("acdefghijl"), (Interval(V["a"], V["j"], 3), Interval(V["c"], V["l"], 3))),
        ConciseRecord(vs("abcdefhijkl"), (Interval(V["a"], V["f"], 3), Interval(V["c"], V["j"], 3),
                                          Interval(V["h"], V["l"], 3))),
    ]


def test_opt_rep_sample(sample):
    recs = list(opt_rep_enumerate(sample))
    assert sorted(recs) == sorted([
        opt_rec("a", "i", "j", "j", 3, True),
        opt_rec("c", "j", "l", "l", 3, True),
        opt_rec("a", "b", "c", "f", 3, False),
        opt_rec("c", "f", "h", "j", 3, False),
        opt_rec("h", "k", "l", "l", 3, False),
    ])
    assert sorted(expand_all(sample, recs)) == sample_paths()


def test_expand_optimal_sample(sample):
    p = expand_optimal(sample, opt_rec("a", "i", "j", "j", 3, True))
    assert p == (vs("acdefghij"), 3)


def test_expand_optimal_bare_edge(sample):
    rec = opt_rec("c", "c", "d", "d", 9, False)
    assert expand_optimal(sample, rec) == (vs("cd"), 9)


def test_expand_optimal_unreachable(sample):
    with pytest.raises(ValueError):
        expand_optimal(sample, opt_rec("b", "i", "j", "j", 3, True))
    with pytest.raises(ValueError):
        expand_optimal(sample, opt_rec("a", "b", "c", "k", 3, False))


def test_expand_concise_empty():
    assert expand_concise([]) == []
    assert expand_concise([ConciseRecord((0, 1, 2), ())]) == []


def test_expand_concise_sample(sample):
    assert sorted(expand_concise(opt_concise(sample))) == sample_paths()


# -- funnels -------------------------------------------------------------------

def test_funnel_outputs():
    g = funnel()
    full = [((0, 1, 3, 4), 3), ((0, 2, 3, 4), 2)]
    assert sorted(opt_raw_enumerate(g)) == full
    cons = list(opt_concise(g))
    assert len(cons) == 2
    for r in cons:
        assert len(r.intervals) == 1
        l, rr, _ = r.intervals[0]
        assert (l, rr) == (r.carrier[0], r.carrier[-1])
    recs = list(opt_rep(g))
    # 0-2-3-4 enters 3 by a non-maximal edge, so only one record is trivial
    assert len(recs) == 2
    assert sorted(r.trivial for r in recs) == [False, True]
    assert sorted(expand_all(g, recs)) == full


def test_sink_only_graph_has_no_output():
    g = FlowGraph(3, [(0, 2, 1), (1, 2, 1)])
    assert list(opt_raw_enumerate(g)) == []
    assert list(opt_concise(g)) == []
    assert list(opt_rep(g)) == []


# -- equivalence and validity ------------------------------------------------------

@settings(max_examples=300, deadline=None)
@given(flow_graphs(max_vertices=16, max_paths=6, max_flow=1000))
def test_all_enumerators_match_bruteforce(g):
    truth = sorted(enumerate_all_maximal_safe_paths_bruteforce(g))
    assert sorted(raw_rep(g)) == truth
    assert sorted(opt_raw_enumerate(g)) == truth
    assert sorted(expand_concise(opt_concise(g))) == truth
    assert sorted(expand_all(g, opt_rep(g))) == truth


@settings(max_examples=200, deadline=None)
@given(flow_graphs(max_vertices=16, max_paths=6, max_flow=50))
def test_concise_validity(g):
    seen = []
    for carrier, ivs in opt_concise(g):
        pos = {v: i for i, v in enumerate(carrier)}
        spans = [(pos[l], pos[r]) for l, r, _ in ivs]
        for a, b in spans:
            assert b - a >= 2
        # strictly increasing ends on both sides: nothing nested
        for (a1, b1), (a2, b2) in zip(spans, spans[1:]):
            assert a1 < a2 and b1 < b2
        seen.extend(carrier[a:b + 1] for a, b in spans)
    assert len(seen) == len(set(seen))


@settings(max_examples=200, deadline=None)
@given(flow_graphs(max_vertices=16, max_paths=6, max_flow=50))
def test_optimal_record_validity(g):
    idx = build_max_edge_index(g)
    forests = build_extension_forests(g, idx)
    for rec in opt_rep(g, idx, forests):
        p, f = expand_optimal(g, rec, forests)
        assert len(p) >= 3
        assert excess_flow(g, p) == f > 0
        for u, _ in g.in_edges_of(p[0]):
            assert f + delta_extend(g, p, "left", (u, p[0])) <= 0
        for v, _ in g.out_edges(p[-1]):
            assert f + delta_extend(g, p, "right", (p[-1], v)) <= 0
        unique_max_in = idx.in_unique[rec.edge_head] and idx.in_tail[rec.edge_head] == rec.edge_tail
        assert bool(unique_max_in) == rec.trivial
        if rec.trivial:
            assert rec.right == rec.edge_head


def test_trie_work_is_output_sensitive():
    rng = np.random.default_rng(3)
    for _ in range(30):
        g, _ = random_flow_graph(rng, 8, 200, 40, 100)
        counters = {}
        tokens = sum(len(p) + 1 for p in opt_raw_enumerate(g, counters=counters))
        assert counters["nodes"] <= 2 * (g.m + g.n) + tokens
