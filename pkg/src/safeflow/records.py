"""Output record types shared by all enumerators."""
from __future__ import annotations

from typing import NamedTuple


class WeightedSafePath(NamedTuple):
    vertices: tuple
    excess: int


class Interval(NamedTuple):
    left: int
    right: int
    flow: int


class ConciseRecord(NamedTuple):
    """A carrier path and the safe subpaths (intervals) it holds, in order."""
    carrier: tuple
    intervals: tuple

    def expand(self) -> list[WeightedSafePath]:
        pos = {v: i for i, v in enumerate(self.carrier)}
        return [WeightedSafePath(self.carrier[pos[l]:pos[r] + 1], f)
                for l, r, f in self.intervals]


class OptimalRecord(NamedTuple):
    """A maximal safe path given by its endpoints and one representative edge.

    The path is recovered by walking the unique max in-edges backwards from
    ``edge_tail`` to ``left`` and the unique max out-edges forwards from
    ``edge_head`` to ``right``.  ``trivial`` marks records whose edge is itself
    the unique max in-edge of its head (so ``right == edge_head``).
    """
    left: int
    edge_tail: int
    edge_head: int
    right: int
    flow: int
    trivial: bool
