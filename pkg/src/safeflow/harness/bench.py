"""Timed, memory-sampled execution of one algorithm on one graph.

Each measurement runs in a forked child so that peak memory belongs to that
run alone.  The parent samples the child's resident set every few
milliseconds, kills it on timeout or when it crosses a memory cap, and takes
the larger of the sampled peak and the child's own high-water mark.
"""
from __future__ import annotations

import csv
import gc
import multiprocessing as mp
import os
import resource
import statistics
import time
from dataclasses import dataclass

import psutil

from ..codec import CountingSink, write_concise, write_optimal, write_raw
from ..flowgraph import FlowGraph, build_max_edge_index
from ..optenum import opt_concise, opt_raw_enumerate, opt_rep
from ..safety import con_rep, raw_rep

CSV_FIELDS = ["dataset", "graph", "algo", "ms", "peak_mb", "tokens", "bytes", "n", "m"]
SAMPLE_INTERVAL = 0.005
DEFAULT_TIMEOUT = 600.0


def _rawrep(g, fh):
    return write_raw(raw_rep(g), fh)


def _conrep(g, fh):
    return write_concise(con_rep(g), fh)


def _optrawrep(g, fh):
    return write_raw(opt_raw_enumerate(g, build_max_edge_index(g)), fh)


def _optconrep(g, fh, heuristic=False):
    return write_concise(opt_concise(g, build_max_edge_index(g)), fh, heuristic=heuristic)


def _optrep(g, fh, heuristic=False):
    return write_optimal(opt_rep(g, build_max_edge_index(g)), fh, heuristic=heuristic)


ALGORITHMS = {
    "rawrep": _rawrep,
    "conrep": _conrep,
    "optrawrep": _optrawrep,
    "optconrep": _optconrep,
    "optconrep#": lambda g, fh: _optconrep(g, fh, True),
    "optrep": _optrep,
    "optrep#": lambda g, fh: _optrep(g, fh, True),
}
OLD_ALGORITHMS = ("rawrep", "conrep")
OPTIMAL_ALGORITHMS = ("optrawrep", "optconrep", "optconrep#", "optrep", "optrep#")


def run_algorithm(algo: str, g: FlowGraph, fh=None):
    """Run ``algo`` on ``g`` writing to ``fh`` (a counting sink by default).

    Returns ``(TokenReport, seconds)``.  Timing covers the algorithm and its
    serialization, not graph parsing.  The cyclic garbage collector is paused
    meanwhile (the algorithms build no reference cycles).
    """
    try:
        fn = ALGORITHMS[algo]
    except KeyError:
        raise ValueError(f"unknown algorithm {algo!r}; choose from {list(ALGORITHMS)}") from None
    sink = fh if fh is not None else CountingSink()
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        t0 = time.perf_counter()
        rep = fn(g, sink)
        secs = time.perf_counter() - t0
    finally:
        if was_enabled:
            gc.enable()
    return rep, secs


@dataclass
class BenchRecord:
    dataset: str
    graph: str
    algo: str
    ms: float | None
    peak_mb: float
    tokens: int | None
    bytes: int | None
    n: int
    m: int
    status: str = "ok"      # ok | timeout | memory | error

    @property
    def finished(self) -> bool:
        return self.status == "ok"

    def row(self) -> list[str]:
        if self.finished:
            ms, tok, byt = f"{self.ms:.3f}", str(self.tokens), str(self.bytes)
        else:
            ms, tok, byt = "DNF", "", ""
        return [self.dataset, self.graph, self.algo, ms, f"{self.peak_mb:.1f}", tok, byt,
                str(self.n), str(self.m)]

    def line(self) -> str:
        return ",".join(self.row())


def _maxrss_mb():
    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024.0


def _child(conn, algo, g):
    try:
        rep, secs = run_algorithm(algo, g)
        conn.send(("ok", secs, rep.tokens, rep.bytes, _maxrss_mb()))
    except MemoryError:
        conn.send(("memory", None, None, None, _maxrss_mb()))
    except BaseException as exc:  # report, never hang the parent
        conn.send(("error", repr(exc), None, None, _maxrss_mb()))
    finally:
        conn.close()


def measure_once(algo: str, g: FlowGraph, timeout: float = DEFAULT_TIMEOUT,
                 mem_limit_mb: float | None = None):
    """One forked run.  Returns (status, seconds, tokens, bytes, peak_mb)."""
    ctx = mp.get_context("fork")
    recv, send = ctx.Pipe(duplex=False)
    proc = ctx.Process(target=_child, args=(send, algo, g), daemon=True)
    proc.start()
    send.close()
    ps = psutil.Process(proc.pid)
    peak = 0.0
    status = None
    result = None
    t0 = time.monotonic()
    while True:
        if recv.poll(SAMPLE_INTERVAL):
            try:
                result = recv.recv()
            except EOFError:
                result = None
            break
        try:
            rss = ps.memory_info().rss / 2**20
        except psutil.Error:
            break
        peak = max(peak, rss)
        if mem_limit_mb is not None and rss > mem_limit_mb:
            status = "memory"
            break
        if time.monotonic() - t0 > timeout:
            status = "timeout"
            break
    if status is not None:
        proc.kill()
        proc.join()
        return status, None, None, None, peak
    proc.join()
    if result is None:
        return "error", None, None, None, peak
    st, secs, tokens, nbytes, maxrss = result
    peak = max(peak, maxrss)
    if st != "ok":
        return st, None, None, None, peak
    return "ok", secs, tokens, nbytes, peak


def bench_cell(algo: str, g: FlowGraph, dataset: str = "", reps: int = 1, warmup: int = 0,
               timeout: float = DEFAULT_TIMEOUT, mem_limit_mb: float | None = None) -> BenchRecord:
    """Median time and maximum peak memory over ``reps`` runs."""
    for _ in range(warmup):
        st, *_ = measure_once(algo, g, timeout, mem_limit_mb)
        if st != "ok":
            break
    times, peak = [], 0.0
    tokens = nbytes = None
    status = "ok"
    for _ in range(max(1, reps)):
        st, secs, tok, byt, pk = measure_once(algo, g, timeout, mem_limit_mb)
        peak = max(peak, pk)
        if st != "ok":
            status = st
            break
        times.append(secs)
        tokens, nbytes = tok, byt
    ms = statistics.median(times) * 1000.0 if status == "ok" else None
    return BenchRecord(dataset, g.name, algo, ms, peak, tokens, nbytes, g.n, g.m, status)


def append_csv(path, records) -> None:
    """Append rows, writing the header first if the file is new or empty."""
    new = not os.path.exists(path) or os.path.getsize(path) == 0
    lines = []
    if new:
        lines.append(",".join(CSV_FIELDS))
    for r in records:
        lines.append(",".join(_csv_escape(x) for x in r.row()))
    data = ("\n".join(lines) + "\n").encode()
    fd = os.open(path, os.O_WRONLY | os.O_APPEND | os.O_CREAT, 0o644)
    try:
        os.write(fd, data)
    finally:
        os.close(fd)


def _csv_escape(s: str) -> str:
    if any(c in s for c in ',"\n'):
        return '"' + s.replace('"', '""') + '"'
    return s


def read_csv(path) -> list[BenchRecord]:
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            done = row["ms"] != "DNF"
            out.append(BenchRecord(
                row["dataset"], row["graph"], row["algo"],
                float(row["ms"]) if done else None, float(row["peak_mb"]),
                int(row["tokens"]) if done else None, int(row["bytes"]) if done else None,
                int(row["n"]), int(row["m"]), "ok" if done else "dnf"))
    return out


__all__ = ["ALGORITHMS", "OLD_ALGORITHMS", "OPTIMAL_ALGORITHMS", "BenchRecord", "CSV_FIELDS",
           "run_algorithm", "measure_once", "bench_cell", "append_csv", "read_csv"]

