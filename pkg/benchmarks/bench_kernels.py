#!/usr/bin/env python3
"""Compare the numba and numpy subset kernels.

Usage: python3 benchmarks/bench_kernels.py [--max-bits 18] [--repeat 5]

Both backends must agree exactly; the first numba call includes compilation
(or a cache load) and is reported separately.
"""

import argparse
import random
import time

import numpy as np

from mcst import kernels


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-bits", type=int, default=18)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if kernels.backend() != "numba":
        print("numba backend unavailable; only numpy timings are meaningful")

    rng = random.Random(args.seed)
    t = time.perf_counter()
    kernels.subset_sums([1, 2, 3], force="numba")
    kernels.induced_sums(3, [(0, 1)], [1], force="numba")
    print(f"numba first call (compile or cache load): {time.perf_counter() - t:.3f}s")

    print(f"{'kernel':<14}{'bits':>6}{'numpy s':>12}{'numba s':>12}{'speedup':>10}")
    for n in range(8, args.max_bits + 1, 2):
        weights = [rng.randint(0, 1000) for _ in range(n)]
        tn, a = _time(lambda: kernels.subset_sums(weights, force="numpy"), args.repeat)
        tb, b = _time(lambda: kernels.subset_sums(weights, force="numba"), args.repeat)
        assert np.array_equal(a, b)
        print(f"{'subset_sums':<14}{n:>6}{tn:>12.5f}{tb:>12.5f}{tn / tb:>10.2f}")

        ends = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.4]
        ew = [rng.randint(0, 1000) for _ in ends]
        tn, a = _time(lambda: kernels.induced_sums(n, ends, ew, force="numpy"), args.repeat)
        tb, b = _time(lambda: kernels.induced_sums(n, ends, ew, force="numba"), args.repeat)
        assert np.array_equal(a, b)
        print(f"{'induced_sums':<14}{n:>6}{tn:>12.5f}{tb:>12.5f}{tn / tb:>10.2f}")


if __name__ == "__main__":
    main()
