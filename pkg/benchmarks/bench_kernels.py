"""Compare the compiled and numpy kernel backends.

Usage: ``python benchmarks/bench_kernels.py [--repeat N]``. Prints one line
per kernel and backend with the best wall time, the speed-up over the numpy
fallback, and the largest difference between the backends' outputs.
"""

import argparse
import time

import numpy as np

from uvorbits import kernels
from uvorbits.diagram import SweepConfig
from uvorbits.dynamics import derive_period_curve


def best_time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def max_diff(a, b):
    a, b = np.asarray(a), np.asarray(b)
    both = np.isfinite(a) & np.isfinite(b)
    if not np.array_equal(np.isfinite(a), np.isfinite(b)):
        return float("inf")
    return float(np.max(np.abs(a[both] - b[both]), initial=0.0))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--grid", type=int, default=801, help="side of the evaluation grid")
    args = ap.parse_args()

    backends = kernels.available()
    cfg = SweepConfig()
    cs = cfg.grid()
    coeffs = derive_period_curve(5, validate=False).poly.coefficient_matrix()
    us = np.linspace(-3, 3, args.grid)
    vs = np.linspace(-3, 3, args.grid)

    jobs = {
        "sweep (2000 columns, UV)": lambda m: m.sweep(cs, True, cfg.transient, cfg.keep, cfg.escape_radius, 1e-12),
        f"eval_grid (C5, {args.grid}^2)": lambda m: m.eval_grid(coeffs, us, vs),
    }
    print(f"active backend: {kernels.BACKEND}; available: {', '.join(sorted(backends))}")
    for name, job in jobs.items():
        results = {}
        for bname in ("python", "cython"):
            if bname in backends:
                results[bname] = best_time(lambda: job(backends[bname]), args.repeat)
        base = results["python"][0]
        for bname, (t, out) in results.items():
            parts = out if isinstance(out, tuple) else (out,)
            ref = results["python"][1]
            ref = ref if isinstance(ref, tuple) else (ref,)
            diff = max(max_diff(a, b) for a, b in zip(parts, ref))
            print(f"{name:32s} {bname:7s} {t * 1e3:9.1f} ms  x{base / t:6.1f}  max|diff| {diff:.1e}")


if __name__ == "__main__":
    main()
