"""Compiled vs pure-Python quadrature kernels.

Two workloads:

* ``kernel``: raw ``catalog_integral`` calls on a fixed mix of
  density/shift pairs and intervals.
* ``moment-sweep``: 200 fractional moments ``m_alpha^+`` of a gamma law
  through the full tail-walking expectation (the inner loop of the moment
  bound).

Usage: ``python benchmarks/bench_kernels.py [--repeat N]``
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from opchernoff import kernels
from opchernoff.distributions import gamma, lognormal, normal, positive_fractional_moment
from opchernoff.shift import exp_fn, logistic_fn, power_fn

CASES = [
    (normal(0, 1), exp_fn(1.0), 0.0, -8.0, 8.0),
    (normal(0, 1), logistic_fn(0.05), -1.0, -8.0, 8.0),
    (gamma(2, 1), power_fn(1.7), 0.0, 0.0, 40.0),
    (lognormal(0, 1), power_fn(0.5), 0.0, 0.0, 200.0),
]


def kernel_workload(mod):
    out = []
    for d, f, z, a, b in CASES:
        dcode, dparams = d.kernel
        wcode, wparams = f.kernel
        wp = np.asarray(wparams, dtype=float)
        out.append(mod.catalog_integral(dcode, dparams, wcode, wp, z, a, b, 1e-12, 1e-10, 2000)[0])
    return out


def moment_workload(mod):
    # route the expectation machinery through the chosen backend
    saved = kernels.catalog_integral
    kernels.catalog_integral = mod.catalog_integral
    try:
        d = gamma(2.5, 1.0)
        return [positive_fractional_moment(d, a).value for a in np.linspace(0.1, 20.0, 200)]
    finally:
        kernels.catalog_integral = saved


def best_of(fn, repeat):
    times = []
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return min(times), result


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)

    backends = ["python"] + (["cython"] if kernels.compiled_available() else [])
    if len(backends) == 1:
        print("compiled kernels not built; only the Python backend is available")
    rows = []
    for name, work in (("kernel", kernel_workload), ("moment-sweep", moment_workload)):
        res = {}
        for b in backends:
            mod = kernels.get_backend(b)
            res[b] = best_of(lambda: work(mod), args.repeat)
        if "cython" in res:
            diff = max(abs(x - y) / max(abs(y), 1e-300)
                       for x, y in zip(res["cython"][1], res["python"][1]))
            speedup = res["python"][0] / res["cython"][0]
            rows.append((name, res["python"][0], res["cython"][0], speedup, diff))
        else:
            rows.append((name, res["python"][0], float("nan"), float("nan"), float("nan")))

    print(f"{'workload':<14}{'python [s]':>12}{'cython [s]':>12}{'speedup':>10}{'max rel diff':>15}")
    for name, tp, tc, sp, diff in rows:
        print(f"{name:<14}{tp:>12.4f}{tc:>12.4f}{sp:>9.1f}x{diff:>15.2e}")


if __name__ == "__main__":
    main()
