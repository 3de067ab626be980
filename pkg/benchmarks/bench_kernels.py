#!/usr/bin/env python3
"""Benchmark the inversion-counting backends (compiled vs numpy fallback).

The inversion count is the hot inner loop of concordant/discordant pair
counting, which dominates Kendall's tau on large edge lists.  Usage:

    python benchmarks/bench_kernels.py [--sizes 10000,100000,1000000] [--repeats 5]
"""

import argparse
import time

import numpy as np

from degdep.kernels import available_backends


def time_call(fn, arr, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn(arr)
        best = min(best, time.perf_counter() - start)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="10000,100000,1000000",
                        help="comma-separated array lengths")
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    sizes = [int(s) for s in args.sizes.split(",")]
    backends = available_backends()
    if "compiled" not in backends:
        print("note: compiled backend unavailable; run `pip install -e .` to build it")
    rng = np.random.default_rng(args.seed)

    regimes = {
        "tie-heavy (12 values)": lambda m: rng.integers(0, 12, m),
        "wide (m values)": lambda m: rng.integers(0, max(2, m), m),
        "reversed": lambda m: np.arange(m)[::-1].copy(),
    }

    header = f"{'regime':<22} {'m':>9} " + "".join(f"{name:>14}" for name in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for regime, make in regimes.items():
        for m in sizes:
            arr = make(m)
            times = {}
            counts = set()
            for name, fn in backends.items():
                elapsed, count = time_call(fn, arr, args.repeats)
                times[name] = elapsed
                counts.add(count)
            assert len(counts) == 1, "backends disagree!"
            line = f"{regime:<22} {m:>9} " + "".join(
                f"{times[name] * 1e3:>12.2f}ms" for name in backends
            )
            if "compiled" in times and "python" in times:
                line += f"{times['python'] / times['compiled']:>9.1f}x"
            print(line)


if __name__ == "__main__":
    main()
