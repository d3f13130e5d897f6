#!/usr/bin/env python3
"""Benchmark the compiled kernel against the pure-numpy fallback.

The kernel (weighted inverse-power distance sums with ordered accumulation)
is the hot loop of every verification check: Green-function values on the
sphere and conformal-factor values on the chart are both instances of it.

Usage:
    python benchmarks/bench_kernels.py [--repeats 5]
"""

import argparse
import time

import numpy as np

from mpquot import _kernels_py

try:
    from mpquot import _kernels

    HAVE_COMPILED = True
except ImportError:
    HAVE_COMPILED = False

CASES = [
    # (points, centers, ambient dim) -- small groups, many evaluation points,
    # then progressively larger center sets (big groups).
    (200_000, 8, 4),
    (50_000, 64, 4),
    (20_000, 512, 7),
    (2_000, 4_096, 7),
]


def best_time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--power", type=int, default=3)
    args = parser.parse_args()

    rng = np.random.Generator(np.random.Philox(key=7))
    print(f"{'points':>9} {'centers':>8} {'dim':>4} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for m, k, d in CASES:
        x = np.ascontiguousarray(rng.standard_normal((m, d)))
        c = np.ascontiguousarray(rng.standard_normal((k, d)))
        w = np.ascontiguousarray(np.abs(rng.standard_normal(k)) + 0.1)

        t_py = best_time(lambda: _kernels_py.inv_power_sums(x, c, w, args.power), args.repeats)
        if HAVE_COMPILED:
            t_cy = best_time(lambda: _kernels.inv_power_sums(x, c, w, args.power), args.repeats)
            s_py, _ = _kernels_py.inv_power_sums(x, c, w, args.power)
            s_cy, _ = _kernels.inv_power_sums(x, c, w, args.power)
            rel = np.max(np.abs(s_py - s_cy) / np.abs(s_py))
            print(f"{m:>9} {k:>8} {d:>4} {t_py:>9.4f}s {t_cy:>9.4f}s {t_py / t_cy:>7.2f}x"
                  f"   (max rel diff {rel:.2e})")
        else:
            print(f"{m:>9} {k:>8} {d:>4} {t_py:>9.4f}s {'n/a':>10} {'n/a':>8}")
    if not HAVE_COMPILED:
        print("compiled extension not available; showing the python backend only")


if __name__ == "__main__":
    main()
