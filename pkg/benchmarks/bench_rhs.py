"""Compare compiled and numpy kernels on RHS evaluation and RK4 stepping.

    python3 benchmarks/bench_rhs.py [--sizes 4 5 8] [--steps 200]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from triadic import backend
from triadic.models import ModelKind, make_spec

PARAMS = {
    ModelKind.SYMMETRIC_COSINE: {"delta1": 0.1, "delta2": 0.1},
    ModelKind.SMOOTHED_KURAMOTO_CLOSURE: {"alpha": 0.5, "beta": 25.0, "gamma": 0.8, "delta": 0.5, "zeta": 0.05},
}


def best_of(fn, repeats=5):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[4, 5, 8])
    ap.add_argument("--steps", type=int, default=200)
    args = ap.parse_args()
    if backend.compiled_kernels is None:
        raise SystemExit("compiled extension not built; run `pip install --no-build-isolation -e .`")

    rng = np.random.default_rng(0)
    print(f"{'model':<26}{'n':>3}{'python rk4 [ms]':>18}{'compiled rk4 [ms]':>20}{'speedup':>10}")
    for kind, params in PARAMS.items():
        for n in args.sizes:
            spec = make_spec(kind, params, rng.normal(size=n))
            y0 = rng.uniform(-1, 1, n + n * n + n ** 3)
            timings = []
            for impl in (backend.python_kernels, backend.compiled_kernels):
                def job():
                    y = y0.copy()
                    impl.rk4_steps(kind.code, y, spec.omega, spec.param_array, spec.flags, n, 0.01, args.steps)
                timings.append(best_of(job))
            py, cc = timings
            print(f"{kind.value:<26}{n:>3}{1e3 * py:>18.2f}{1e3 * cc:>20.2f}{py / cc:>9.1f}x")


if __name__ == "__main__":
    main()
