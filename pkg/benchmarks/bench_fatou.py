#!/usr/bin/env python3
"""Timing comparison of the compiled (numba) and plain numpy kernel paths.

Run directly:  python3 benchmarks/bench_fatou.py [--points N] [--steps N]
"""

import argparse
import cmath
import math
import time

import numpy as np

from folsing.fatou import NumericGerm, _advance, _census_kernel, backend


def time_call(fn, repeats=3):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=200)
    ap.add_argument("--steps", type=int, default=100000)
    ap.add_argument("--census-iter", type=int, default=20000)
    args = ap.parse_args()

    coeffs = np.array([1.0, 1.0, 1.0], dtype=np.complex128)
    germ = NumericGerm(coeffs)
    rng = np.random.default_rng(7)
    zs = (-0.12 + 0.04 * rng.random(args.points)
          + 0.05j * (rng.random(args.points) - 0.5)).astype(np.complex128)
    rot = np.array([cmath.exp(2j * math.pi * (math.sqrt(2) - 1))],
                   dtype=np.complex128)
    grid = (0.4 * (rng.random(400) - 0.5)
            + 0.4j * (rng.random(400) - 0.5)).astype(np.complex128)

    print(f"default backend: {backend()}")
    print(f"{'task':<28}{'numba':>12}{'numpy':>12}{'speedup':>10}")
    rows = [
        ("orbit advance %dx%d" % (args.points, args.steps),
         lambda f: _advance(coeffs, zs, args.steps, germ.radius, force=f)),
        ("census 400x%d" % args.census_iter,
         lambda f: _census_kernel(rot, grid, 0.5, args.census_iter, 1e-9,
                                  force=f)),
    ]
    for name, call in rows:
        call("numba")  # warm the JIT so compilation is not timed
        t_nb = time_call(lambda: call("numba"))
        t_np = time_call(lambda: call("numpy"))
        print(f"{name:<28}{t_nb:>11.4f}s{t_np:>11.4f}s{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
