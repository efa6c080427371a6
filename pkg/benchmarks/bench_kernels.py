#!/usr/bin/env python3
"""Time the chordal kernels: compiled extension vs numpy fallback.

The trace recurrence is the only quadratic-cost loop in the package, so it
is the one worth compiling.  Run after an editable install:

    python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from loewner import _chordal_numpy
from loewner.driving import brownian_driving

try:
    from loewner import _chordal_kernels
except ImportError:
    _chordal_kernels = None

SIZES = (500, 2000, 8000)
KAPPA = 2.0


def _inputs(n: int):
    term = brownian_driving(seed=1, kappa=KAPPA, T=1.0, n=n)
    times = np.linspace(0.0, 1.0, n + 1)
    values = term.values_at(times)
    xi = np.ascontiguousarray(values[:-1], dtype=float)
    dt = np.diff(times)
    seeds = np.ascontiguousarray(values[1:] + 1e-6j)
    return xi, dt, seeds


def _best_of(fn, repeats: int = 3) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    print(f"{'n':>6}  {'numpy':>10}  {'cython':>10}  {'speedup':>8}")
    for n in SIZES:
        xi, dt, seeds = _inputs(n)
        t_np = _best_of(lambda: _chordal_numpy.trace_points(xi, dt, seeds))
        if _chordal_kernels is None:
            print(f"{n:>6}  {t_np:>9.4f}s  {'missing':>10}  {'-':>8}")
            continue
        t_cy = _best_of(lambda: _chordal_kernels.trace_points(xi, dt, seeds))
        out_np = _chordal_numpy.trace_points(xi, dt, seeds)
        out_cy = _chordal_kernels.trace_points(xi, dt, seeds)
        worst = float(np.nanmax(np.abs(out_np - out_cy)))
        print(f"{n:>6}  {t_np:>9.4f}s  {t_cy:>9.4f}s  {t_np / t_cy:>7.1f}x"
              f"   (max deviation {worst:.2e})")


if __name__ == "__main__":
    main()
