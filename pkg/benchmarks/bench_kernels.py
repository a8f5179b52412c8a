"""Benchmark the compiled kernels against the pure-Python fallback.

Usage:  python benchmarks/bench_kernels.py [--repeat N]

Runs both backends on production-sized workloads (the master-equation
trajectory and the discretized-bath evolution) and prints the timing
ratio.  The compiled extension is skipped when it is not built.
"""

import argparse
import time

import numpy as np

from twistcav import _kernels_py

try:
    from twistcav import _kernels
except ImportError:
    _kernels = None

RHO0 = np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex)


def lindblad_workload(impl):
    # 40k steps: the dt-halving acceptance scenario scale
    return impl.lindblad_rk4(RHO0, 1.0, 0.125, 0.0416, 2e-4, 40_000, 100, 1e-12)


def bath_workload(impl):
    m = 4096
    spacing = 200.0 / m
    freqs = (np.arange(m) + 0.5) * spacing
    eps = freqs - 100.0
    g = np.sqrt(1.0 / (2 * np.pi) * spacing) * np.ones(m)
    dts = np.full(10, 2.5e-4)
    steps = np.full(10, 200, dtype=np.int64)
    return impl.bath_rk4(eps, g, dts, steps)


def best_of(func, impl, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        result = func(impl)
        times.append(time.perf_counter() - start)
    return min(times), result


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    workloads = [("lindblad_rk4 (40k steps)", lindblad_workload),
                 ("bath_rk4 (4096 modes x 2k steps)", bath_workload)]

    print(f"{'kernel':<34} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for name, func in workloads:
        t_py, r_py = best_of(func, _kernels_py, args.repeat)
        if _kernels is None:
            print(f"{name:<34} {t_py:>9.3f}s {'n/a':>10} {'n/a':>8}")
            continue
        t_cy, r_cy = best_of(func, _kernels, args.repeat)
        agreement = np.max(np.abs(np.asarray(r_py[0]) - np.asarray(r_cy[0])))
        print(
            f"{name:<34} {t_py:>9.3f}s {t_cy:>9.3f}s {t_py / t_cy:>7.1f}x"
            f"   (max |diff| = {agreement:.1e})"
        )


if __name__ == "__main__":
    main()
