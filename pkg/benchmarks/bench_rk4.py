"""Benchmark the compiled RK4 chain kernel against the numpy fallback.

Usage: python3 benchmarks/bench_rk4.py [--sizes 8 32 128] [--steps 20000]
"""

import argparse
import time

import numpy as np

from spinbatt import meanfield, model
from spinbatt._chain_rk4_py import integrate_chain_rk4 as rk4_py

try:
    from spinbatt._chain_rk4 import integrate_chain_rk4 as rk4_cy
except ImportError:
    rk4_cy = None


def bench(kernel, n, steps, dt=1e-3):
    spec = model.BatterySpec(n, 1.0, 1.0, 1.0 / n, 0.0, "lr", 1.0)
    g = np.ascontiguousarray(model.build_coupling(spec).matrix)
    s0 = meanfield.all_down_chain(n)
    start = time.perf_counter()
    kernel(g, spec.alpha, spec.field_b, spec.omega, s0, dt, steps)
    return time.perf_counter() - start


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+", default=[8, 32, 128])
    parser.add_argument("--steps", type=int, default=20000)
    args = parser.parse_args()

    print(f"selected backend at import: {meanfield.kernel_backend()}")
    print(f"{'N':>5} {'numpy s':>10} {'cython s':>10} {'speedup':>8}")
    for n in args.sizes:
        t_py = bench(rk4_py, n, args.steps)
        if rk4_cy is None:
            print(f"{n:>5} {t_py:>10.3f} {'n/a':>10} {'n/a':>8}")
            continue
        t_cy = bench(rk4_cy, n, args.steps)
        print(f"{n:>5} {t_py:>10.3f} {t_cy:>10.3f} {t_py / t_cy:>7.1f}x")
    print(f"({args.steps} RK4 steps per run)")


if __name__ == "__main__":
    main()
