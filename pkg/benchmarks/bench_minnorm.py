"""Benchmark the compiled Wolfe min-norm kernel against the pure-numpy fallback.

Runs both backends on the same random point clouds, checks that the answers
agree, and prints per-size timing plus the speedup ratio.

Usage:
    python3 benchmarks/bench_minnorm.py [--seed S] [--repeats R]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from flatstab.kernels import wolfe_py

try:
    from flatstab.kernels import _wolfe

    COMPILED = _wolfe.wolfe_min_norm
except ImportError:  # extension not built
    COMPILED = None

SIZES = [(8, 2), (32, 3), (128, 4), (512, 8), (2048, 16)]


def _time(fn, clouds, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for P in clouds:
            fn(P)
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--clouds", type=int, default=20, help="clouds per size")
    args = ap.parse_args(argv)

    if COMPILED is None:
        print("compiled kernel not available; build the extension first")
        return 1

    rng = np.random.default_rng(args.seed)
    print(f"{'m x n':>12} {'python [ms]':>12} {'cython [ms]':>12} {'speedup':>8}")
    for m, n in SIZES:
        # shifted clouds so the min-norm point is an interior face point
        clouds = [rng.standard_normal((m, n)) + 0.5 for _ in range(args.clouds)]
        for P in clouds:
            x_py, w_py, _ = wolfe_py.wolfe_min_norm(P)
            x_cy, w_cy, _ = COMPILED(P)
            assert np.allclose(x_py, x_cy, atol=1e-8), "backends disagree"
            assert abs(w_py.sum() - 1.0) < 1e-9 and abs(w_cy.sum() - 1.0) < 1e-9
        t_py = _time(wolfe_py.wolfe_min_norm, clouds, args.repeats)
        t_cy = _time(COMPILED, clouds, args.repeats)
        print(
            f"{f'{m} x {n}':>12} {1e3 * t_py:12.3f} {1e3 * t_cy:12.3f}"
            f" {t_py / t_cy:8.2f}x"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
