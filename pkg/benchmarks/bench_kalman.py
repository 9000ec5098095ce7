"""Benchmark the compiled Kalman filter kernel against the numpy fallback.

The filter recursion dominates maximum-likelihood fitting of the seasonal
model (state dimension 26 for the default order), so this is the hot loop
the compiled extension exists for.

Usage: python3 benchmarks/bench_kalman.py [n_obs] [repeats]
"""
import sys
import time

import numpy as np

from aethercast.sarimax import _filter_py
from aethercast.sarimax.orders import expand_arma
from aethercast.sarimax.statespace import build_statespace

try:
    from aethercast.sarimax import _filter as _filter_cy
except ImportError:
    _filter_cy = None


def problem(n_obs: int, n_cols: int = 3, seed: int = 0):
    # default seasonal order: (1,1,1)(1,1,1,24) -> state dimension 26
    a, b = expand_arma([0.5], [0.3], [0.4], [0.2], 24)
    ss = build_statespace(a, b)
    rng = np.random.default_rng(seed)
    Y = np.ascontiguousarray(rng.normal(size=(n_obs, n_cols)))
    T = np.ascontiguousarray(ss.transition)
    RRt = np.ascontiguousarray(np.outer(ss.loading, ss.loading))
    P0 = np.ascontiguousarray(ss.initial_cov)
    return T, RRt, P0, Y


def bench(kernel, args, repeats: int) -> float:
    kernel(*args)  # warm up
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        kernel(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    n_obs = int(sys.argv[1]) if len(sys.argv) > 1 else 5_000
    repeats = int(sys.argv[2]) if len(sys.argv) > 2 else 5
    args = problem(n_obs)
    print(f"state dim {args[0].shape[0]}, {n_obs} observations, "
          f"{args[3].shape[1]} columns, best of {repeats}")

    t_py = bench(_filter_py.filter_columns, args, repeats)
    print(f"python kernel:  {t_py * 1e3:8.2f} ms")
    if _filter_cy is None:
        print("compiled kernel: not built")
        return
    t_cy = bench(_filter_cy.filter_columns, args, repeats)
    print(f"cython kernel:  {t_cy * 1e3:8.2f} ms")
    print(f"speedup: {t_py / t_cy:.1f}x")

    nu_p, F_p, A_p = _filter_py.filter_columns(*args)
    nu_c, F_c, A_c = _filter_cy.filter_columns(*args)
    worst = max(np.max(np.abs(nu_p - nu_c)), np.max(np.abs(F_p - F_c)),
                np.max(np.abs(A_p - A_c)))
    print(f"max abs disagreement: {worst:.2e}")


if __name__ == "__main__":
    main()
