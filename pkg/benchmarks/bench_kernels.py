"""Time the numba and numpy g-neighbour backends on generated hypergraphs.

    python benchmarks/bench_kernels.py [--sizes 1000,5000,20000] [--repeats 3]

Prints one CSV row per (size, backend, workload). ``kernel`` times a batch
of neighbour_sizes calls over every node; ``asap`` times a full peeling run.
"""

import argparse
import statistics
import sys
import time

import numpy as np

from hypercore import _accel, asap
from hypercore.generate import GenConfig, gen_hypergraph


def timed(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="1000,5000,20000")
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    if not _accel.NUMBA_AVAILABLE:
        sys.exit("numba is not installed; nothing to compare")
    _accel.warmup()
    print("size,hyperedges,backend,workload,median_seconds")
    for n in [int(x) for x in args.sizes.split(",")]:
        hg = gen_hypergraph(GenConfig(n, 2 * n, seed=args.seed))
        nodes = np.arange(hg.node_count)
        alive_n = np.ones(hg.node_count, np.bool_)
        alive_e = np.ones(hg.edge_count, np.bool_)
        scratch = (np.zeros(hg.node_count, np.int64), np.zeros(hg.node_count, np.int64))
        for backend in ("numba", "numpy"):
            _accel.use_backend(backend)
            kernel = timed(lambda: _accel.neighbour_sizes(nodes, 2, hg.csr, alive_n, alive_e, scratch), args.repeats)
            full = timed(lambda: asap(hg, 5, 2, "0.6"), args.repeats)
            print(f"{n},{hg.edge_count},{backend},kernel,{kernel:.6f}")
            print(f"{n},{hg.edge_count},{backend},asap,{full:.6f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
