"""Aho-Corasick automaton over integer sequences.

Used to drop sequences that occur as a contiguous run inside another one,
which is how redundant safe paths are removed.
"""
from __future__ import annotations

from collections import deque


class Automaton:
    def __init__(self, patterns):
        self.goto = [{}]
        self.fail = [0]
        self.term = [-1]     # pattern id ending here, or -1
        self.out = [-1]      # nearest proper suffix node that is terminal
        for pid, pat in enumerate(patterns):
            self._insert(pat, pid)
        self._link()

    def _insert(self, pat, pid):
        goto, node = self.goto, 0
        for a in pat:
            nxt = goto[node].get(a)
            if nxt is None:
                nxt = len(goto)
                goto[node][a] = nxt
                goto.append({})
                self.fail.append(0)
                self.term.append(-1)
                self.out.append(-1)
            node = nxt
        if self.term[node] < 0:
            self.term[node] = pid

    def _link(self):
        goto, fail, term, out = self.goto, self.fail, self.term, self.out
        queue = deque(goto[0].values())
        while queue:
            node = queue.popleft()
            for a, child in goto[node].items():
                queue.append(child)
                f = fail[node]
                while f and a not in goto[f]:
                    f = fail[f]
                fc = goto[f].get(a, 0)
                fail[child] = fc if fc != child else 0
                out[child] = fail[child] if term[fail[child]] >= 0 else out[fail[child]]

    def step(self, node, a):
        goto, fail = self.goto, self.fail
        while node and a not in goto[node]:
            node = fail[node]
        return goto[node].get(a, 0)


def filter_contained(seqs):
    """Indices of sequences not contained (contiguously) in another one.

    Exact duplicates keep their first occurrence.  Input order is preserved.
    """
    first = {}
    uniq = []
    for i, s in enumerate(seqs):
        t = tuple(s)
        if t not in first:
            first[t] = i
            uniq.append(t)
    ac = Automaton(uniq)
    term, out = ac.term, ac.out
    covered = [False] * len(uniq)
    done = [False] * len(ac.goto)
    for pid, t in enumerate(uniq):
        node = 0
        last = len(t) - 1
        for i, a in enumerate(t):
            node = ac.step(node, a)
            x = node
            if i == last:
                # the full pattern matches itself, start from its suffixes
                x = out[x]
            while x > 0 and not done[x]:
                if term[x] >= 0:
                    covered[term[x]] = True
                done[x] = True
                x = out[x]
    return [first[t] for pid, t in enumerate(uniq) if not covered[pid]]
