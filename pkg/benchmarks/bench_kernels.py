"""Compiled kernels vs the numpy/Python fallback.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from cubeforms import _kernels_py
from cubeforms.rng import SplitMix64

try:
    from cubeforms import _kernels
except ImportError:
    _kernels = None


def cases():
    g = SplitMix64(1)
    p, m = 5, 7
    counts = np.array([g.below(100) for _ in range(p ** m)], dtype=np.int64)
    col = np.array([g.below(p) for _ in range(m)], dtype=np.int64)
    alphabet = np.array([0, 1, 2], dtype=np.int64)
    yield "convolve_step p=5 m=7", lambda k: k.convolve_step(counts, p, m, col, alphabet)

    p, rows_n, n = 3, 9, 40
    target = np.array([g.below(p) for _ in range(n)], dtype=np.int64)
    rows = np.array([[g.below(p) for _ in range(n)] for _ in range(rows_n)], dtype=np.int64)
    yield "scan_combinations p=3 m=9 n=40", lambda k: k.scan_combinations(target, rows, p, -1)

    p, kk, n = 5, 8, 30
    coef = np.array([[g.below(p) for _ in range(n)] for _ in range(kk)], dtype=np.int64)
    masks = np.array([0b00111] * kk, dtype=np.int64)
    yield "mc_count p=5 k=8 n=30 samples=20000", lambda k: k.mc_count(coef, masks, alphabet, p, 20000, 7)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _kernels is None:
        print("compiled extension not built; only the fallback can run")
    print(f"{'kernel':<40} {'fallback (s)':>12} {'compiled (s)':>12} {'speedup':>8}")
    for name, fn in cases():
        slow = min(timeit.repeat(lambda: fn(_kernels_py), number=1, repeat=args.repeat))
        if _kernels is None:
            print(f"{name:<40} {slow:>12.4f} {'-':>12} {'-':>8}")
            continue
        a, b = fn(_kernels), fn(_kernels_py)
        same = np.array_equal(np.asarray(a[1] if isinstance(a, tuple) else a),
                              np.asarray(b[1] if isinstance(b, tuple) else b))
        fast = min(timeit.repeat(lambda: fn(_kernels), number=1, repeat=args.repeat))
        print(f"{name:<40} {slow:>12.4f} {fast:>12.4f} {slow / fast:>7.1f}x" + ("" if same else "  MISMATCH"))


if __name__ == "__main__":
    main()
