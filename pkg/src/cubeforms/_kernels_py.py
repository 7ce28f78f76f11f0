"""Reference kernels in Python/numpy.

Same contracts as the compiled ``_kernels`` module; also the only path for
count vectors that would overflow int64 (object arrays of Python ints).
"""

import numpy as np

from .rng import SplitMix64

COMPILED = False


def convolve_step(counts, p, m, col, alphabet):
    """One coordinate of the distribution DP.

    ``counts`` is indexed by the mixed-radix code of (y_0, ..., y_{m-1}),
    digit 0 most significant.  Returns sum over s in alphabet of the vector
    shifted by s * col (digit-wise mod p).
    """
    if m == 0:
        return counts * len(alphabet)
    cube = counts.reshape((p,) * m)
    axes = tuple(range(m))
    out = None
    for s in alphabet:
        shift = tuple(int(s) * int(c) % p for c in col)
        rolled = np.roll(cube, shift, axis=axes)
        out = rolled.copy() if out is None else out + rolled
    return out.reshape(-1)


def scan_combinations(target, rows, p, stop_below):
    """Scan a in F_p^m in lexicographic order (a_0 most significant) and
    minimise the support of target + sum a_i rows_i.

    Stops as soon as the best support drops below ``stop_below``.  Returns
    (best_support, first vector attaining it).
    """
    rows = np.asarray(rows, dtype=np.int64)
    acc = np.asarray(target, dtype=np.int64) % p
    m = rows.shape[0]
    a = [0] * m
    best = int(np.count_nonzero(acc))
    best_vec = tuple(a)
    if best < stop_below or m == 0:
        return best, best_vec
    while True:
        i = m - 1
        while i >= 0:
            a[i] += 1
            acc = (acc + rows[i]) % p
            if a[i] < p:
                break
            a[i] = 0
            i -= 1
        if i < 0:
            return best, best_vec
        nz = int(np.count_nonzero(acc))
        if nz < best:
            best, best_vec = nz, tuple(a)
            if best < stop_below:
                return best, best_vec


def mc_count(coef, masks, alphabet, p, samples, seed):
    """Number of hits among ``samples`` uniform points of S^N.

    Coordinates are drawn in column order with SplitMix64(seed).
    """
    coef = np.asarray(coef, dtype=np.int64)
    k, n = coef.shape
    terms = [[(z, int(coef[i, z])) for z in range(n) if coef[i, z]] for i in range(k)]
    masks = [int(v) for v in masks]
    alphabet = [int(v) for v in alphabet]
    gen = SplitMix64(seed)
    size = len(alphabet)
    hits = 0
    for _ in range(samples):
        x = [alphabet[gen.below(size)] for _ in range(n)]
        for i in range(k):
            v = sum(c * x[z] for z, c in terms[i]) % p
            if not masks[i] >> v & 1:
                break
        else:
            hits += 1
    return hits
