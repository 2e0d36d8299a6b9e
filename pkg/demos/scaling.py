"""Time, peak memory and output size of every algorithm as n grows.

Each cell runs in a forked child (see safeflow.harness.bench).  The old
pipeline is capped at 10x the memory of the raw optimal enumerator and
usually stops early on the larger sizes.

Run: python3 demos/scaling.py [max_n]
"""
import sys

from safeflow.harness.bench import bench_cell
from safeflow.randgen import GenParams, gen_improved


def main(max_n=10**5):
    n = 1000
    print(f"{'n':>8} {'algorithm':11} {'seconds':>8} {'peak MB':>8} {'tokens':>10}")
    while n <= max_n:
        g = gen_improved(GenParams(n=n, k=100, d=max(2, n // 100), seed=1))
        base = None
        for algo in ["optrawrep", "optconrep", "optconrep#", "optrep", "optrep#",
                     "rawrep", "conrep"]:
            cap = 10 * base.peak_mb if base and algo in ("rawrep", "conrep") else None
            rec = bench_cell(algo, g, timeout=120, mem_limit_mb=cap)
            base = base or rec
            secs = f"{rec.ms / 1000:.2f}" if rec.finished else "DNF"
            tokens = rec.tokens if rec.finished else "-"
            print(f"{n:8d} {algo:11} {secs:>8} {rec.peak_mb:8.0f} {tokens:>10}", flush=True)
        n *= 10


if __name__ == "__main__":
    main(int(float(sys.argv[1])) if len(sys.argv) > 1 else 10**5)
