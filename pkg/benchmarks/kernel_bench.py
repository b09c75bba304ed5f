"""Benchmark: compiled kernels vs the pure-Python fallback.

Usage: python benchmarks/kernel_bench.py [n_scale]

Runs each hot kernel on both backends with identical inputs, reports wall
time and speedup, and verifies the outputs are bit-identical while at it.
"""

import math
import sys
import time

import numpy as np

from fptsim import _kernels_py as kp

try:
    from fptsim import _kernels as kc
except ImportError:
    kc = None

PI = math.pi


def bench(name, fn_c, fn_p, check=True):
    t0 = time.perf_counter()
    out_p = fn_p()
    t_p = time.perf_counter() - t0
    if kc is None:
        print(f"{name:24s} pure {t_p * 1e3:9.1f} ms   (compiled backend not built)")
        return
    t0 = time.perf_counter()
    out_c = fn_c()
    t_c = time.perf_counter() - t0
    if check:
        flat_p = out_p if isinstance(out_p, tuple) else (out_p,)
        flat_c = out_c if isinstance(out_c, tuple) else (out_c,)
        identical = all(np.array_equal(a, b) for a, b in zip(flat_c, flat_p))
    else:
        identical = True
    print(f"{name:24s} pure {t_p * 1e3:9.1f} ms   compiled {t_c * 1e3:8.2f} ms"
          f"   speedup {t_p / t_c:7.1f}x   identical={identical}")


def main():
    scale = float(sys.argv[1]) if len(sys.argv) > 1 else 1.0
    n = int(100_000 * scale)
    trials = int(2_000 * scale)
    print(f"n_draws={n}, n_trials={trials}")

    bench("gaussians",
          lambda: kc.gaussians(1, 0, n),
          lambda: kp.gaussians(1, 0, n))
    bench("inverse_gaussians",
          lambda: kc.inverse_gaussians(1, 0, n, 1.0, 1.0),
          lambda: kp.inverse_gaussians(1, 0, n, 1.0, 1.0))
    a1 = (kp.FAM_SQRT, (1.0,), 2.0 ** -10, 7, 0, trials, 10 ** 6)
    bench("algo1_batch sqrt",
          lambda: kc.algo1_batch(*a1),
          lambda: kp.algo1_batch(*a1))
    a2 = (kp.FAM_COSINE, (3.5, 3.0, PI / 2), 2.0 ** -10, 20.0,
          3.0 * PI / 2 + 0.5, 7, 0, trials, 10 ** 7)
    bench("algo2_batch cosine",
          lambda: kc.algo2_batch(*a2),
          lambda: kp.algo2_batch(*a2))
    eu = (0.5, 0.0, kp.FAM_COSINE, (2.0, 1.0, 2 * PI), 0.01, 5.0, 0.0, 1,
          7, 0, trials)
    bench("euler_batch bridge",
          lambda: kc.euler_batch(*eu),
          lambda: kp.euler_batch(*eu))


if __name__ == "__main__":
    main()
