"""Compare the compiled and numpy batch_mul kernels.

Usage: python benchmarks/bench_kernels.py [--repeat 20]
"""
import argparse
import timeit

import numpy as np

from skewps import _pykernels, kernels
from skewps.fields import field

CASES = [
    # (p, k, s, n, L)
    (2, 1, 1, 64, 16),
    (2, 2, 2, 64, 16),
    (2, 2, 2, 256, 32),
    (3, 3, 2, 64, 16),
    (2, 2, 4, 32, 24),
]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    compiled = kernels._compiled
    print(f"compiled backend available: {compiled is not None}")
    print(f"{'p':>2} {'k':>2} {'s':>2} {'n':>4} {'L':>3}  {'numpy ms':>9} {'cython ms':>9} {'speedup':>7}")
    rng = np.random.default_rng(0)
    for p, k, s, n, L in CASES:
        F = field(p, k)
        A = rng.integers(0, p, size=(n, s, s, L, k))
        B = rng.integers(0, p, size=(n, s, s, L, k))
        t_np = min(timeit.repeat(lambda: _pykernels.batch_mul(A, B, L, p, F.red), number=1, repeat=args.repeat))
        if compiled is not None:
            assert np.array_equal(compiled.batch_mul(A, B, L, p, F.red), _pykernels.batch_mul(A, B, L, p, F.red))
            t_cy = min(timeit.repeat(lambda: compiled.batch_mul(A, B, L, p, F.red), number=1, repeat=args.repeat))
            print(f"{p:>2} {k:>2} {s:>2} {n:>4} {L:>3}  {t_np * 1e3:9.3f} {t_cy * 1e3:9.3f} {t_np / t_cy:7.2f}")
        else:
            print(f"{p:>2} {k:>2} {s:>2} {n:>4} {L:>3}  {t_np * 1e3:9.3f} {'-':>9} {'-':>7}")


if __name__ == "__main__":
    main()
