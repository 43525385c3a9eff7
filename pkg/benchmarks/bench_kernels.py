#!/usr/bin/env python3
"""Time the numba-compiled kernels against the pure-numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N]

The active backend for the package is chosen at import from
CAPACITY_LAB_NO_NUMBA; this script ignores that and times both
implementations directly.
"""

import argparse
import random
import time

import numpy as np

from capacity_lab import _kernels


def _pairs(n, seed=3):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        a, b = rng.uniform(0.2, 4.0), rng.uniform(0.2, 4.0)
        c, d = rng.uniform(0.2, 4.0), rng.uniform(0.2, 4.0)
        if c / a > d / b:
            (a, b), (c, d) = (c, d), (a, b)
        if abs(c / a - d / b) < 1e-6:
            continue
        k = rng.randint(1, 12)
        v1 = rng.randint(0, k)
        out.append((float(v1), float(k - v1), a, b, c, d))
    return out


def bench_support_max(impl, cases):
    acc = 0.0
    for v1, v2, a, b, c, d in cases:
        acc += impl(v1, v2, a, b, c, d, 4096, 80)
    return acc


def bench_convexity(impl, cases, psis):
    c1 = np.empty_like(psis)
    c2 = np.empty_like(psis)
    gp = np.empty_like(psis)
    for _, _, a, b, c, d in cases:
        impl(a, b, c, d, psis, c1, c2, gp)
    return float(c1[0])


def bench_omega(impl, cases, psis):
    x1 = np.empty_like(psis)
    x2 = np.empty_like(psis)
    for _, _, a, b, c, d in cases:
        impl(a, b, c, d, psis, x1, x2)
    return float(x1[0])


def bench_split(impl, p):
    out = np.empty_like(p)
    impl(p, 1.5, 0.5, out)
    return float(out[0])


def timed(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3, help="timing repetitions, best-of")
    args = ap.parse_args()

    cases = _pairs(200)
    psis = 0.5 * np.pi * np.arange(1, 1001) / 1001
    p = np.ascontiguousarray(np.linspace(0.0, 1.0, 1_000_000))

    jobs = {
        "support_max (200 x grid 4096 + 80 gss)": (
            lambda impl: bench_support_max(impl, cases),
            "support_max",
        ),
        "convexity_grid (200 x 1000 pts)": (
            lambda impl: bench_convexity(impl, cases, psis),
            "convexity_grid",
        ),
        "omega_xy (200 x 1000 pts)": (
            lambda impl: bench_omega(impl, cases, psis),
            "omega_xy",
        ),
        "polydisk_support_split (1e6)": (
            lambda impl: bench_split(impl, p),
            "polydisk_support_split",
        ),
        "ellipsoid_support_split (1e6)": (
            lambda impl: bench_split(impl, p),
            "ellipsoid_support_split",
        ),
    }

    print(f"numba available: {_kernels.NUMBA_AVAILABLE}")
    header = f"{'kernel':<42} {'numpy':>10} {'numba':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for label, (runner, name) in jobs.items():
        np_impl = _kernels.NUMPY_IMPLS[name]
        t_np = timed(lambda: runner(np_impl), args.repeat)
        if _kernels.NUMBA_AVAILABLE:
            nb_impl = _kernels.NUMBA_IMPLS[name]
            runner(nb_impl)  # compile outside the timer
            t_nb = timed(lambda: runner(nb_impl), args.repeat)
            print(f"{label:<42} {t_np * 1e3:>8.1f}ms {t_nb * 1e3:>8.1f}ms {t_np / t_nb:>7.1f}x")
        else:
            print(f"{label:<42} {t_np * 1e3:>8.1f}ms {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
