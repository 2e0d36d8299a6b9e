"""Enumeration and compact encoding of safe paths in flow graphs."""
from .flowgraph import (ConservationError, CycleError, FlowGraph, GraphError, MaxEdgeIndex,
                        ParseError, ValidationError, build_max_edge_index, funnel_vertex_ratio,
                        is_funnel, parse_graphs, read_graphs, topological_order, write_graphs)
from .records import ConciseRecord, Interval, OptimalRecord, WeightedSafePath

__version__ = "0.1.0"
