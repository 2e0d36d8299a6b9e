"""Compare the three random graph models and how the funnel probability p
shapes safe paths in the improved model.

Run: python3 demos/generators.py
"""
from safeflow.codec import dataset_statistics
from safeflow.flowgraph import funnel_vertex_ratio
from safeflow.randgen import GenParams, generate


def main():
    print("model     funnel-ratio  safe-paths  avg-len  %non-trivial")
    for model in ("uniform", "powerlaw", "improved"):
        graphs = [generate(model, GenParams(n=2000, k=20, d=100, seed=s)) for s in range(5)]
        st = dataset_statistics(graphs)
        ratio = sum(map(funnel_vertex_ratio, graphs)) / len(graphs)
        print(f"{model:9} {ratio:12.3f} {st['safe_paths']:11d} {st['avg_safe_len']:8.1f} "
              f"{st['pct_nontrivial']:13.1f}")

    print("\nimproved model, varying p (chance of routing a hop along the backbone is p^2):")
    for p in (0.0, 0.5, 0.81, 0.95, 1.0):
        graphs = [generate("improved", GenParams(n=2000, k=20, d=100, p=p, seed=s))
                  for s in range(5)]
        st = dataset_statistics(graphs)
        print(f"  p={p:<5} edges {st['avg_edges']:7.0f}  avg safe length {st['avg_safe_len']:7.1f}"
              f"  carriers {st['carriers']:4d}")


if __name__ == "__main__":
    main()
