"""Compare the compiled and pure-Python kernels on the oracle workloads.

Run from the repository root after an editable install:

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each workload is timed under both backends and the results are checked for
equality, so a speedup is only reported for matching answers.
"""

import argparse
import random
import time

from congestlab import _kernels, comm, gadgets, oracles
from congestlab.graph import Graph, apsp_exact


def random_graph(n, p, w_max, seed):
    rng = random.Random(seed)
    edges = [(u, v, rng.randint(1, w_max)) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph(n, edges)


def workloads():
    apsp = random_graph(120, 0.1, 1000, 1)
    mvc = [gadgets.build_mvc(4, *comm.sample_pair(16, random.Random(i))).graph for i in range(20)]
    col = [gadgets.build_coloring3(4, *comm.sample_pair(16, random.Random(i))).graph for i in range(20)]
    cyc = [gadgets.build_weighted_cycle(4, *comm.sample_pair(16, random.Random(i))) for i in range(20)]
    return {
        "apsp n=120": lambda: apsp_exact(apsp).rows,
        "min vertex cover (20 graphs)": lambda: [oracles.min_vc_size(g) for g in mvc],
        "3-colorability (20 graphs)": lambda: [oracles.is_c_colorable(g, 3) for g in col],
        "weighted 8-cycles (20 graphs)": lambda: [
            oracles.has_cycle_len8_weight(i.graph, i.params["W"])[0] for i in cyc
        ],
    }


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if "compiled" not in _kernels.BACKENDS:
        print("compiled kernels are not built; only the python backend is available")
    print(f"{'workload':32} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
    for name, fn in workloads().items():
        with _kernels.backend_scope("python"):
            t_py, ref = best_of(fn, args.repeat)
        if "compiled" in _kernels.BACKENDS:
            with _kernels.backend_scope("compiled"):
                t_c, got = best_of(fn, args.repeat)
            if got != ref:
                raise SystemExit(f"{name}: backends disagree")
            print(f"{name:32} {t_py:10.4f} {t_c:11.4f} {t_py / t_c:7.1f}x")
        else:
            print(f"{name:32} {t_py:10.4f} {'-':>11} {'-':>8}")


if __name__ == "__main__":
    main()
