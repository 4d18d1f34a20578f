"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py [--nodes 1133] [--edges 5451] [--steps 50] [--full-run]

Times one game timestep (payoffs plus imitation), Brandes betweenness and
all-pairs BFS distance sums on a random graph with a heavy-tailed degree
distribution, and checks that both backends give identical results.
``--full-run`` additionally times a complete default experiment run with
the active backend on the same graph.
"""

import argparse
import tempfile
import time
from pathlib import Path

import numpy as np

from netcoop import kernels
from netcoop.experiment import ExperimentConfig, run_experiment
from netcoop.game import PayoffMatrix
from netcoop.graph import Graph, write_edge_list


def random_graph(n: int, m: int, seed: int) -> Graph:
    """Spanning tree plus weighted random edges (Chung-Lu style), ``m`` edges in total."""
    if m < n - 1 or m > n * (n - 1) // 2:
        raise SystemExit(f"cannot build a connected simple graph with {n} nodes and {m} edges")
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    edges = set()
    for k in range(1, n):
        u, v = int(order[k]), int(order[rng.integers(0, k)])
        edges.add((min(u, v), max(u, v)))
    w = np.arange(1, n + 1, dtype=float) ** -0.7
    w /= w.sum()
    while len(edges) < m:
        u, v = rng.choice(n, 2, p=w)
        if u != v:
            edges.add((min(u, v), max(u, v)))
    return Graph(n, tuple(sorted(edges)))


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def game_steps(mod, g: Graph, steps: int, seed: int):
    rng = np.random.default_rng(seed)
    n = g.node_count
    s = (rng.random(n) < 0.5).astype(np.uint8)
    nxt = np.empty_like(s)
    payoffs = np.empty(n)
    table = PayoffMatrix.nowak_may(1.8).table()
    for _ in range(steps):
        mod.accumulate_payoffs(g.indptr, g.indices, s, table, payoffs)
        mod.imitate(g.indptr, g.indices, s, payoffs, 1.8, rng.random((n, 2)), nxt)
        s, nxt = nxt, s
    return s


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=1133)
    ap.add_argument("--edges", type=int, default=5451)
    ap.add_argument("--steps", type=int, default=50, help="game timesteps per timing")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--full-run", action="store_true")
    args = ap.parse_args(argv)

    g = random_graph(args.nodes, args.edges, args.seed)
    print(f"graph: {g.node_count} nodes, {g.edge_count} edges")
    backends = {"python": kernels.python_backend}
    if kernels.compiled_backend is None:
        print("compiled backend not built; timing the Python fallback only")
    else:
        backends["cython"] = kernels.compiled_backend

    cases = {
        f"game x{args.steps}": lambda mod: game_steps(mod, g, args.steps, args.seed),
        "brandes": lambda mod: mod.brandes(g.indptr, g.indices),
        "distance_sums": lambda mod: mod.distance_sums(g.indptr, g.indices),
    }
    print(f"{'kernel':<16}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}  agree")
    for label, fn in cases.items():
        results = {b: fn(mod) for b, mod in backends.items()}
        times = {b: best_of(lambda: fn(mod), args.repeat) for b, mod in backends.items()}
        row = f"{label:<16}" + "".join(f"{times[b]:>11.4f}s" for b in backends)
        if len(backends) == 2:
            a, c = results["python"], results["cython"]
            agree = all(np.array_equal(x, y) for x, y in zip(a, c)) if isinstance(a, tuple) else np.array_equal(a, c)
            row += f"{times['python'] / times['cython']:>9.1f}x  {agree}"
        print(row)

    if args.full_run:
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "bench.txt"
            write_edge_list(g, path)
            t = time.perf_counter()
            run_experiment(ExperimentConfig(path, b=1.8, seed=args.seed, output_dir=Path(tmp) / "out"))
            print(f"full default run ({kernels.BACKEND}): {time.perf_counter() - t:.1f}s")


if __name__ == "__main__":
    main()
