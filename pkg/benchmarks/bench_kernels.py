"""Timing comparison: compiled kernels vs the numpy reference.

Run after installing the package:

    python benchmarks/bench_kernels.py

Covers the three hot paths: the Chafee time-stepper, the parabolic
time-stepper, and the max-min squared-distance scan behind Hausdorff
semidistances.
"""

import time

import numpy as np

from attractorlab._kernels import _ref

try:
    from attractorlab._kernels import _core
except ImportError:
    _core = None


def best_of(fn, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def chafee_case(mod):
    n, steps, dt = 127, 2000, 0.005
    h = np.pi / (n + 1)
    x = h * np.arange(1, n + 1)
    u0 = 0.8 * np.sin(x)
    b_vals = np.full(steps, 1.0)
    snap = np.array([steps], dtype=np.int64)
    return lambda: mod.chafee_march(u0, dt, h, 2.0, b_vals, snap)


def parabolic_case(mod):
    n, steps, dt = 127, 2000, 0.005
    h = 1.0 / (n + 1)
    x = h * np.arange(1, n + 1)
    u0 = x * (1.0 - x)
    b_vals = np.full(steps, 2.0)
    w_vals = np.full(steps, 0.5)
    snap = np.array([steps], dtype=np.int64)
    return lambda: mod.parabolic_march(u0, dt, h, b_vals, w_vals, snap)


def maxmin_case(mod):
    rng = np.random.default_rng(7)
    a = rng.normal(size=(4000, 2))
    b = rng.normal(size=(2500, 2))
    return lambda: mod.maxmin_sq(a, b)


def main():
    cases = [
        ("chafee_march (n=127, 2000 steps)", chafee_case),
        ("parabolic_march (n=127, 2000 steps)", parabolic_case),
        ("maxmin_sq (4000 x 2500, dim 2)", maxmin_case),
    ]
    print(f"{'case':40s} {'numpy':>10s} {'cython':>10s} {'speedup':>8s}")
    for name, make in cases:
        t_ref = best_of(make(_ref))
        if _core is None:
            print(f"{name:40s} {t_ref * 1e3:9.2f}ms {'n/a':>10s} {'n/a':>8s}")
            continue
        t_core = best_of(make(_core))
        print(
            f"{name:40s} {t_ref * 1e3:9.2f}ms {t_core * 1e3:9.2f}ms "
            f"{t_ref / t_core:7.1f}x"
        )
    if _core is None:
        print("\ncompiled kernels unavailable; showing reference timings only")


if __name__ == "__main__":
    main()
