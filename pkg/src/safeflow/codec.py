"""Text encodings of safe-path outputs and their token accounting.

A token is one whitespace-separated item.  Every writer counts the tokens it
emits, so a report always equals ``len(text.split())`` for the text written.

Formats (``|`` separates lines, ``>`` marks a line indented by a tab):

raw
    ``v1 ... vk f`` per path.
concise
    carrier line ``v1 ... vk`` followed by ``> l r f`` per interval.
concise, heuristic
    Same carrier line.  An interval drops endpoints the reader can infer:
    the left end of the first interval and the right end of the last one are
    the carrier ends, and a left end equal to the previous right end is
    omitted.  A lone interval is just ``> f``.
optimal
    ``l x y f`` for a trivial record, and for non-trivial records an edge
    line ``x y`` followed by ``> l r f`` per path using that edge.
optimal, heuristic
    Trivial records become ``f l y`` (the edge is the unique max in-edge of
    ``y``).  Entries omit ``l`` when it equals ``x`` and ``r`` when it equals
    ``y``; a two-token entry ``w f`` is read as a left end when ``w`` comes
    before ``x`` in topological order.  Reading this format needs the graph.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, TextIO

from .flowgraph import FlowGraph, build_max_edge_index, funnel_vertex_ratio, is_funnel
from .records import ConciseRecord, Interval, OptimalRecord, WeightedSafePath


class FormatError(ValueError):
    pass


@dataclass
class TokenReport:
    tokens: int = 0
    bytes: int = 0
    records: int = 0
    lines: int = 0

    def __iadd__(self, other):
        self.tokens += other.tokens
        self.bytes += other.bytes
        self.records += other.records
        self.lines += other.lines
        return self


class CountingSink:
    """Write-only stream that keeps only a byte count."""

    def __init__(self):
        self.bytes = 0

    def write(self, s: str) -> int:
        self.bytes += len(s)
        return len(s)

    def flush(self):
        pass


def count_tokens(text: str) -> int:
    return len(text.split())


class _Writer:
    def __init__(self, fh, labels):
        self.fh = fh
        self.rep = TokenReport()
        if labels is None:
            self.name = str
            self.ascii = True
        else:
            self.name = labels.__getitem__
            self.ascii = False

    def line(self, items, indent=False):
        s = " ".join(items)
        s = ("\t" + s + "\n") if indent else (s + "\n")
        self.fh.write(s)
        r = self.rep
        r.tokens += len(items)
        r.bytes += len(s) if self.ascii else len(s.encode())
        r.lines += 1

    def verts(self, vs):
        return list(map(self.name, vs))


def _text(fn, records, **kw):
    buf = io.StringIO()
    rep = fn(records, buf, **kw)
    return buf.getvalue(), rep


# -- writers ----------------------------------------------------------------

def write_raw(paths: Iterable[WeightedSafePath], fh: TextIO, labels=None) -> TokenReport:
    w = _Writer(fh, labels)
    for vs, f in paths:
        w.line(w.verts(vs) + [str(f)])
        w.rep.records += 1
    return w.rep


def write_concise(records: Iterable[ConciseRecord], fh: TextIO, heuristic: bool = False,
                  labels=None, validate: bool = False) -> TokenReport:
    w = _Writer(fh, labels)
    name = w.name
    for carrier, ivs in records:
        k = len(ivs)
        if validate:
            _check_carrier(carrier, ivs)
        if heuristic and k and (ivs[0][0] != carrier[0] or ivs[-1][1] != carrier[-1]):
            raise ValueError("heuristic form needs intervals spanning the whole carrier")
        w.line(w.verts(carrier))
        prev_r = None
        for i, (l, r, f) in enumerate(ivs):
            fs = str(f)
            if not heuristic:
                w.line([name(l), name(r), fs], True)
            elif k == 1:
                w.line([fs], True)
            elif i == 0:
                w.line([name(r), fs], True)
            elif i == k - 1:
                w.line([fs] if l == prev_r else [name(l), fs], True)
            else:
                w.line([name(r), fs] if l == prev_r else [name(l), name(r), fs], True)
            prev_r = r
        w.rep.records += k
    return w.rep


def _check_carrier(carrier, ivs):
    pos = {v: i for i, v in enumerate(carrier)}
    for l, r, _ in ivs:
        if l not in pos or r not in pos or pos[l] >= pos[r]:
            raise ValueError(f"interval ({l}, {r}) is not a subpath of its carrier")


def write_optimal(records: Iterable[OptimalRecord], fh: TextIO, heuristic: bool = False,
                  labels=None) -> TokenReport:
    """Non-trivial records are grouped under their edge while consecutive."""
    w = _Writer(fh, labels)
    name = w.name
    edge = None
    for l, x, y, r, f, trivial in records:
        fs = str(f)
        if trivial:
            edge = None
            if heuristic:
                w.line([fs, name(l), name(y)])
            else:
                w.line([name(l), name(x), name(y), fs])
        else:
            if edge != (x, y):
                edge = (x, y)
                w.line([name(x), name(y)])
            if not heuristic:
                w.line([name(l), name(r), fs], True)
            elif l == x:
                w.line([name(r), fs], True)
            elif r == y:
                w.line([name(l), fs], True)
            else:
                w.line([name(l), name(r), fs], True)
        w.rep.records += 1
    return w.rep


def serialize_raw(paths, labels=None):
    return _text(write_raw, paths, labels=labels)


def serialize_concise(records, heuristic=False, labels=None):
    return _text(write_concise, records, heuristic=heuristic, labels=labels, validate=True)


def serialize_optimal(records, heuristic=False, labels=None):
    return _text(write_optimal, records, heuristic=heuristic, labels=labels)


def serialize_concise_heuristic(records, labels=None):
    return serialize_concise(records, True, labels)


def serialize_optimal_heuristic(records, labels=None):
    return serialize_optimal(records, True, labels)


# -- readers ----------------------------------------------------------------

def _lines(text):
    for no, raw in enumerate(text.splitlines(), 1):
        toks = raw.split()
        if toks:
            yield no, raw[:1] in (" ", "\t"), toks


def _reader(labels):
    if labels is None:
        def num(tok, no):
            try:
                return int(tok)
            except ValueError:
                raise FormatError(f"line {no}: bad vertex {tok!r}") from None
        return num
    inv = {str(s): i for i, s in enumerate(labels)} if not isinstance(labels, dict) \
        else {str(s): i for i, s in labels.items()}

    def lab(tok, no):
        try:
            return inv[tok]
        except KeyError:
            raise FormatError(f"line {no}: unknown vertex {tok!r}") from None
    return lab


def _flow(tok, no):
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"line {no}: bad flow {tok!r}") from None


def parse_raw(text: str, labels=None) -> list[WeightedSafePath]:
    vid = _reader(labels)
    out = []
    for no, ind, toks in _lines(text):
        if ind or len(toks) < 3:
            raise FormatError(f"line {no}: expected 'v1 ... vk f' with k >= 2")
        out.append(WeightedSafePath(tuple(vid(t, no) for t in toks[:-1]), _flow(toks[-1], no)))
    return out


def _decode_heuristic(carrier, lines):
    k = len(lines)
    ivs = []
    first, end = carrier[0], carrier[-1]
    prev_r = None
    for i, (no, items) in enumerate(lines):
        n = len(items)
        if k == 1:
            if n != 1:
                raise FormatError(f"line {no}: a lone interval is written as its flow only")
            l, r = first, end
        elif i == 0:
            if n != 2:
                raise FormatError(f"line {no}: first interval must be 'r f'")
            l, r = first, items[0]
        elif i == k - 1:
            if n == 1:
                l = prev_r
            elif n == 2:
                l = items[0]
            else:
                raise FormatError(f"line {no}: last interval must be 'l f' or 'f'")
            r = end
        else:
            if n == 3:
                l, r = items[0], items[1]
            elif n == 2:
                l, r = prev_r, items[0]
            else:
                raise FormatError(f"line {no}: interval must be 'l r f' or 'r f'")
        ivs.append(Interval(l, r, items[-1]))
        prev_r = r
    return ivs


def parse_concise(text: str, heuristic: bool = False, labels=None) -> list[ConciseRecord]:
    vid = _reader(labels)
    out = []
    carrier = None
    group = []

    def close():
        if carrier is None:
            return
        if not group:
            raise FormatError("carrier without intervals")
        if heuristic:
            ivs = _decode_heuristic(carrier, group)
        else:
            ivs = []
            for no, items in group:
                if len(items) != 3:
                    raise FormatError(f"line {no}: expected 'l r f'")
                ivs.append(Interval(*items))
        try:
            _check_carrier(carrier, ivs)
        except ValueError as exc:
            raise FormatError(str(exc)) from None
        out.append(ConciseRecord(tuple(carrier), tuple(ivs)))

    for no, ind, toks in _lines(text):
        if not ind:
            close()
            carrier = [vid(t, no) for t in toks]
            group = []
        else:
            if carrier is None:
                raise FormatError(f"line {no}: interval before any carrier")
            items = [vid(t, no) for t in toks[:-1]] + [_flow(toks[-1], no)]
            group.append((no, items))
    close()
    return out


def parse_optimal(text: str, heuristic: bool = False, graph: FlowGraph | None = None,
                  labels=None, index=None) -> list[OptimalRecord]:
    """Read optimal records.  The heuristic form needs ``graph``."""
    vid = _reader(labels)
    if heuristic:
        if graph is None:
            raise ValueError("reading the heuristic optimal format needs the graph")
        index = index or build_max_edge_index(graph)
        in_tail = index.in_tail.tolist()
        in_unique = index.in_unique.tolist()
        pos = graph.pos.tolist()
    out = []
    edge = None
    for no, ind, toks in _lines(text):
        n = len(toks)
        if not ind:
            if n == 2:
                edge = (vid(toks[0], no), vid(toks[1], no))
                continue
            edge = None
            if not heuristic and n == 4:
                l, x, y = (vid(t, no) for t in toks[:3])
                out.append(OptimalRecord(l, x, y, y, _flow(toks[3], no), True))
            elif heuristic and n == 3:
                f = _flow(toks[0], no)
                l, y = vid(toks[1], no), vid(toks[2], no)
                if not in_unique[y]:
                    raise FormatError(f"line {no}: vertex {toks[2]} has no unique max in-edge")
                out.append(OptimalRecord(l, in_tail[y], y, y, f, True))
            else:
                raise FormatError(f"line {no}: unexpected {n}-token record")
            continue
        if edge is None:
            raise FormatError(f"line {no}: entry outside an edge group")
        x, y = edge
        f = _flow(toks[-1], no)
        if n == 3:
            l, r = vid(toks[0], no), vid(toks[1], no)
        elif heuristic and n == 2:
            w = vid(toks[0], no)
            if pos[w] < pos[x]:
                l, r = w, y
            else:
                l, r = x, w
        else:
            raise FormatError(f"line {no}: unexpected {n}-token entry")
        out.append(OptimalRecord(l, x, y, r, f, False))
    return out


# -- dataset statistics ------------------------------------------------------

STAT_FIELDS = [
    "graphs", "avg_nodes", "avg_edges", "pct_funnel", "funnel_prob", "avg_complexity",
    "safe_paths", "avg_safe_len", "carriers", "avg_carrier_len", "avg_indices",
    "pct_single", "pct_start_end", "pct_successive", "pct_nontrivial", "avg_indices_opt",
]


@dataclass
class _Acc:
    graphs: int = 0
    nodes: int = 0
    edges: int = 0
    funnels: int = 0
    funnel_ratio: float = 0.0
    complexity: int = 0
    paths: int = 0
    path_edges: int = 0
    carriers: int = 0
    carrier_edges: int = 0
    intervals: int = 0
    single: int = 0
    start_end: int = 0
    successive: int = 0
    records: int = 0
    nontrivial: int = 0
    nt_edges: int = 0


def _pct(a, b):
    return 100.0 * a / b if b else 0.0


def _avg(a, b):
    return a / b if b else 0.0


def dataset_statistics(graphs: Iterable[FlowGraph], outputs=None) -> dict:
    """Summary statistics of safe paths over a dataset.

    ``outputs`` may map a graph position to precomputed ``(raw, concise,
    optimal)`` record lists; missing entries are computed here.  Averages
    and percentages are pooled over all items of the dataset, not averaged
    per graph.  Lengths count edges.
    """
    from .optenum import opt_concise, opt_raw_enumerate, opt_rep
    from .safety import candidate_flow_decomposition

    a = _Acc()
    for gi, g in enumerate(graphs):
        if outputs is not None and gi in outputs:
            raw, con, opt = outputs[gi]
        else:
            index = build_max_edge_index(g)
            raw = list(opt_raw_enumerate(g, index))
            con = list(opt_concise(g, index))
            opt = list(opt_rep(g, index))
        a.graphs += 1
        a.nodes += g.n
        a.edges += g.m
        a.funnels += is_funnel(g)
        a.funnel_ratio += funnel_vertex_ratio(g)
        a.complexity += len(candidate_flow_decomposition(g))
        a.paths += len(raw)
        a.path_edges += sum(len(p.vertices) - 1 for p in raw)
        for carrier, ivs in con:
            k = len(ivs)
            a.carriers += 1
            a.carrier_edges += len(carrier) - 1
            a.intervals += k
            if k == 1:
                a.single += 1
            else:
                first, last = carrier[0], carrier[-1]
                a.start_end += sum(1 for l, r, _ in ivs if l == first or r == last)
            a.successive += sum(1 for p, q in zip(ivs, ivs[1:]) if q[0] == p[1])
        edges_nt = set()
        for rec in opt:
            a.records += 1
            if not rec.trivial:
                a.nontrivial += 1
                edges_nt.add((rec.edge_tail, rec.edge_head))
        a.nt_edges += len(edges_nt)
    return {
        "graphs": a.graphs,
        "avg_nodes": _avg(a.nodes, a.graphs),
        "avg_edges": _avg(a.edges, a.graphs),
        "pct_funnel": _pct(a.funnels, a.graphs),
        "funnel_prob": _avg(a.funnel_ratio, a.graphs),
        "avg_complexity": _avg(a.complexity, a.graphs),
        "safe_paths": a.paths,
        "avg_safe_len": _avg(a.path_edges, a.paths),
        "carriers": a.carriers,
        "avg_carrier_len": _avg(a.carrier_edges, a.carriers),
        "avg_indices": _avg(a.intervals, a.carriers),
        "pct_single": _pct(a.single, a.carriers),
        "pct_start_end": _pct(a.start_end, a.intervals),
        "pct_successive": _pct(a.successive, a.intervals),
        "pct_nontrivial": _pct(a.nontrivial, a.records),
        "avg_indices_opt": _avg(a.nontrivial, a.nt_edges),
    }


def write_statistics_csv(rows: list[dict], fh: TextIO, label_field="dataset") -> None:
    w = csv.DictWriter(fh, fieldnames=[label_field] + STAT_FIELDS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: (f"{v:.4f}" if isinstance(v, float) else v) for k, v in row.items()})


__all__ = [
    "TokenReport", "CountingSink", "FormatError", "count_tokens",
    "write_raw", "write_concise", "write_optimal",
    "serialize_raw", "serialize_concise", "serialize_optimal",
    "serialize_concise_heuristic", "serialize_optimal_heuristic",
    "parse_raw", "parse_concise", "parse_optimal",
    "dataset_statistics", "write_statistics_csv", "STAT_FIELDS",
]
