"""Walk through every output representation on a small 12-vertex flow graph.

Run: python3 demos/running_example.py
"""
from safeflow import FlowGraph
from safeflow.codec import serialize_concise, serialize_optimal, serialize_raw
from safeflow.optenum import expand_all, opt_concise, opt_raw_enumerate, opt_rep

LABELS = list("abcdefghijkl")
EDGES = "ab3 ac6 bc3 cd9 de9 ef9 fg6 fh3 gh6 hi9 ij9 jk3 jl6 kl3".split()


def main():
    ix = {c: i for i, c in enumerate(LABELS)}
    g = FlowGraph(12, [(ix[e[0]], ix[e[1]], int(e[2:])) for e in EDGES], name="example")
    print(f"graph: {g.n} vertices, {g.m} edges, total flow {g.total_flow()}\n")

    raw = list(opt_raw_enumerate(g))
    text, rep = serialize_raw(raw, labels=LABELS)
    print(f"every maximal safe path with its excess flow ({rep.tokens} tokens):")
    print(text)

    con = list(opt_concise(g))
    for heuristic in (False, True):
        text, rep = serialize_concise(con, heuristic, labels=LABELS)
        tag = "compressed " if heuristic else ""
        print(f"{tag}concise form: carriers with the intervals they hold ({rep.tokens} tokens):")
        print(text)

    opt = list(opt_rep(g))
    for heuristic in (False, True):
        text, rep = serialize_optimal(opt, heuristic, labels=LABELS)
        tag = "compressed " if heuristic else ""
        print(f"{tag}optimal form: endpoints plus one edge per path ({rep.tokens} tokens):")
        print(text)

    print("rebuilding the paths from the optimal records:")
    for p in expand_all(g, opt):
        print("  " + "".join(LABELS[v] for v in p.vertices), p.excess)


if __name__ == "__main__":
    main()
