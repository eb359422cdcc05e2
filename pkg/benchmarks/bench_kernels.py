#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy fallback.

Times the two hot paths (power-sum recursion, grouped binomial convolution)
on realistic workloads and prints a comparison table.  Run after an editable
install; if the compiled extension is missing only the fallback is timed.

    python3 benchmarks/bench_kernels.py [--sizes 1000,4000,16000] [--repeat 3]
"""

import argparse
import math
import time

import numpy as np

from cobose import _kernels_py

try:
    from cobose import _kernels
except ImportError:
    _kernels = None


def _power_sum_logs(values, n_max):
    lm = np.full(n_max + 1, -np.inf)
    lm[1] = 0.0
    m = np.arange(2, n_max + 1, dtype=float)
    rows = np.array([m * math.log(v) for v in values])
    lm[2:] = np.logaddexp.reduce(rows, axis=0)
    return lm


def _group_series(value, mult, n_max):
    n = np.arange(n_max + 1)
    lf = np.array([math.lgamma(k + 1) for k in range(n_max + mult + 1)])
    return n * math.log(value) + lf[n + mult - 1] - lf[mult - 1] - lf[n]


def _tail_series(mass, n_max):
    n = np.arange(n_max + 1)
    lf = np.array([math.lgamma(k + 1) for k in range(n_max + 1)])
    return n * math.log(mass) - lf


def _time(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="1000,4000,16000")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    backends = [("python", _kernels_py)]
    if _kernels is not None:
        backends.append(("cython", _kernels))
    else:
        print("compiled extension not available; timing the fallback only")

    rng = np.random.default_rng(7)
    values = rng.random(5)
    values /= values.sum()

    print(f"{'kernel':<12} {'n':>7} " + " ".join(f"{name:>12}" for name, _ in backends) + "  speedup")
    for n in sizes:
        lm = _power_sum_logs(values, n)
        times = []
        for _, mod in backends:
            times.append(_time(lambda m=mod: m.chi_log_h_series(lm, n), args.repeat))
        spd = f"{times[0] / times[-1]:6.1f}x" if len(times) > 1 else "      -"
        print(f"{'recursion':<12} {n:>7} " + " ".join(f"{t * 1e3:>10.1f}ms" for t in times) + " " + spd)

        a = _group_series(1e-3, 100, n)
        b = _tail_series(0.9, n)
        times = []
        for _, mod in backends:
            times.append(_time(lambda m=mod: m.convolve_log_h(a, b, n + 1), args.repeat))
        spd = f"{times[0] / times[-1]:6.1f}x" if len(times) > 1 else "      -"
        print(f"{'convolution':<12} {n:>7} " + " ".join(f"{t * 1e3:>10.1f}ms" for t in times) + " " + spd)


if __name__ == "__main__":
    main()
