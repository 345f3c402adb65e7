"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import math
import timeit

import numpy as np

from fockoptics import _kernels_py as py
from fockoptics.fock import coherent_amplitudes
from fockoptics.kernels import binomial_table

try:
    from fockoptics import _kernels as cy
except ImportError:
    cy = None


def cases():
    binom = binomial_table(170)
    amps = coherent_amplitudes(3.0 + 1.0j, 60)
    phis = np.linspace(0, 2 * math.pi, 4096, endpoint=False)
    r, t = 1 / math.sqrt(2), 1j / math.sqrt(2)
    big = coherent_amplitudes(4.0, 120)
    return {
        "phase_density(n_max=60, 4096 pts)": lambda k: k.phase_density(amps, phis),
        "split_number_amplitudes(40, 40)": lambda k: k.split_number_amplitudes(40, 40, r, t, r, t, binom),
        "split_fock(n_max=120)": lambda k: k.split_fock(big, r, t, binom),
        "mz_triple_sum(n=60)": lambda k: k.mz_triple_sum(60, r, t, r, t, 0.7, binom),
        "phase_variance_series(|g|=3)": lambda k: k.phase_variance_series(3.0, 4000, 1e-12),
    }


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    print(f"{'kernel':40s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speedup':>8s}")
    for name, fn in cases().items():
        t_py = min(timeit.repeat(lambda: fn(py), number=1, repeat=args.repeat)) * 1e3
        if cy is None:
            print(f"{name:40s} {t_py:12.3f} {'n/a':>12s} {'n/a':>8s}")
            continue
        t_cy = min(timeit.repeat(lambda: fn(cy), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:40s} {t_py:12.3f} {t_cy:12.3f} {t_py / t_cy:8.1f}")


if __name__ == "__main__":
    main()
