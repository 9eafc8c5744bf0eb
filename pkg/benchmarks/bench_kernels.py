#!/usr/bin/env python3
"""Benchmark the compiled RK4 kernels against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--steps N] [--repeats K]
"""

import argparse
import time

from epcharge import _kernels_py

try:
    from epcharge import _kernels_cy
except ImportError:
    _kernels_cy = None


def time_call(fn, args, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--steps", type=int, default=200_000)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    n = args.steps
    reduced_args = (-0.5j - 0.5, 0.5j - 0.5, 1.0 + 0j, 0j, 0j,
                    1e-4, n, n)
    full_args = (-0.1j - 0.2, -0.3 + 0j, 0.1j - 0.2, -0.3 + 0j,
                 -0.3 + 0j, -0.3 + 0j, -2.2 + 0j, 1.0 + 0j,
                 0j, 0j, 0j, 1e-4, n, n)

    print(f"RK4 kernel benchmark, {n} steps, best of {args.repeats}")
    print(f"{'kernel':<14}{'backend':<10}{'time [s]':>10}{'steps/s':>14}")
    rows = [("rk4_reduced", reduced_args,
             _kernels_py.rk4_reduced,
             _kernels_cy.rk4_reduced if _kernels_cy else None),
            ("rk4_full", full_args,
             _kernels_py.rk4_full,
             _kernels_cy.rk4_full if _kernels_cy else None)]
    for name, call_args, py_fn, cy_fn in rows:
        t_py = time_call(py_fn, call_args, args.repeats)
        print(f"{name:<14}{'python':<10}{t_py:>10.4f}{n / t_py:>14.3g}")
        if cy_fn is not None:
            t_cy = time_call(cy_fn, call_args, args.repeats)
            print(f"{name:<14}{'cython':<10}{t_cy:>10.4f}{n / t_cy:>14.3g}"
                  f"   ({t_py / t_cy:.1f}x speedup)")
        else:
            print(f"{name:<14}{'cython':<10}{'not built':>10}")


if __name__ == "__main__":
    main()
