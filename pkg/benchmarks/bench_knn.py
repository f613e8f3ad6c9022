#!/usr/bin/env python3
"""Benchmark the two k-NN backends: numba fused kernel vs numpy fallback.

The numpy path materializes the full score matrix and stable-sorts it; the
numba path fuses scoring and heap selection per query. Run:

    python3 benchmarks/bench_knn.py [--rows 50000] [--dim 300] [--queries 64]
"""

import argparse
import statistics
import time

import numpy as np

from egvi import _kernels


def run(fn, matrix, queries, k, exclude, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        ids, scores = fn(matrix, queries, k, exclude)
        times.append(time.perf_counter() - t0)
    return ids, scores, times


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rows", type=int, default=50_000)
    ap.add_argument("--dim", type=int, default=300)
    ap.add_argument("--queries", type=int, default=64)
    ap.add_argument("--k", type=int, default=200)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    matrix = rng.standard_normal((args.rows, args.dim))
    matrix /= np.linalg.norm(matrix, axis=1, keepdims=True)
    queries = np.ascontiguousarray(rng.standard_normal((args.queries, args.dim)))
    exclude = np.full((args.queries, 1), -1, dtype=np.int64)

    print(f"matrix {args.rows}x{args.dim}, {args.queries} queries, k={args.k}")

    backends = [("numpy", _kernels.topk_batch_numpy)]
    if _kernels.NUMBA_ENABLED:
        _kernels.warmup()  # JIT compile outside the timed region
        backends.append(("numba", _kernels.topk_batch_numba))
    else:
        print("numba unavailable or disabled (EGVI_NUMBA=0); numpy only")

    results = {}
    for name, fn in backends:
        ids, scores, times = run(fn, matrix, queries, args.k, exclude, args.repeats)
        results[name] = (ids, times)
        best = min(times)
        qps = args.queries / best
        print(
            f"{name:>6}: best {best * 1e3:8.1f} ms  median {statistics.median(times) * 1e3:8.1f} ms"
            f"  ({qps:7.1f} queries/s)"
        )

    if len(results) == 2:
        same = np.array_equal(results["numpy"][0], results["numba"][0])
        ratio = min(results["numpy"][1]) / min(results["numba"][1])
        print(f"agreement on ids: {same};  numba speedup over numpy: {ratio:.2f}x")


if __name__ == "__main__":
    main()
