"""Benchmark driver, cross-checking and command line."""
from .bench import (ALGORITHMS, CSV_FIELDS, BenchRecord, append_csv, bench_cell, measure_once,
                    read_csv, run_algorithm)
from .verify import check_graph, minimize, safe_path_sets, verify_graphs
