"""Timing comparison of the compiled evaluation core vs the numpy fallback.

Runs the four hot kernels on representative shapes, checks both backends
agree to near machine precision, and prints per-call wall times with the
speedup ratio. Invoke as a script:

    python benchmarks/backend_bench.py [--n 500] [--p 300] [--repeats 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from kdm import _core_py

try:
    from kdm import _core
except ImportError:
    _core = None


def best_of(repeats: int, fn, *args) -> tuple[float, np.ndarray]:
    out = None
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, np.asarray(out)


def bench_case(name, py_fn, c_fn, args, repeats):
    t_py, out_py = best_of(repeats, py_fn, *args)
    if c_fn is None:
        print(f"{name:34s} numpy {t_py*1e3:8.2f} ms   compiled —")
        return
    t_c, out_c = best_of(repeats, c_fn, *args)
    err = float(np.max(np.abs(out_py - out_c)))
    print(f"{name:34s} numpy {t_py*1e3:8.2f} ms   compiled {t_c*1e3:8.2f} ms"
          f"   x{t_py/t_c:6.1f}   max|diff| {err:.2e}")


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=500)
    ap.add_argument("--p", type=int, default=300)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    if _core is None:
        print("compiled core unavailable; timing the numpy fallback only")

    rng = np.random.default_rng(0)
    for d in (2, 6, 20):
        X = rng.standard_normal((args.n, d))
        Z = rng.standard_normal((60, d))
        W = rng.standard_normal((args.p, d))
        phases = rng.uniform(0.0, 2.0 * np.pi, args.p)
        inv_sigma = np.full(d, 1.0 / 1.3)
        print(f"\nN={args.n}, d={d}, p_rff={args.p}, landmarks=60")
        for code, family in enumerate(
            ("gaussian", "laplacian", "matern32", "matern52", "ratquad2", "ratquad5")
        ):
            bench_case(
                f"gram[{family}]",
                _core_py.gram, None if _core is None else _core.gram,
                (code, X, Z, inv_sigma), args.repeats,
            )
        bench_case(
            "gaussian_cross_derivs",
            _core_py.gaussian_cross_derivs,
            None if _core is None else _core.gaussian_cross_derivs,
            (X, Z, inv_sigma), args.repeats,
        )
        bench_case(
            "cos_features",
            _core_py.cos_features, None if _core is None else _core.cos_features,
            (X, W, phases), args.repeats,
        )
        bench_case(
            "cos_feature_derivs",
            _core_py.cos_feature_derivs,
            None if _core is None else _core.cos_feature_derivs,
            (X, W, phases), args.repeats,
        )


if __name__ == "__main__":
    main()
