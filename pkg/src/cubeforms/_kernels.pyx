# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels.  Contracts mirror ``_kernels_py``; counts are int64 and
the caller guarantees they cannot overflow."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport malloc, free

cnp.import_array()

COMPILED = True

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL


cdef inline uint64_t _mix64(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


def convolve_step(counts, int p, int m, col, alphabet):
    cdef int64_t[::1] cur = np.ascontiguousarray(counts, dtype=np.int64)
    cdef Py_ssize_t size = cur.shape[0]
    out_arr = np.zeros(size, dtype=np.int64)
    cdef int64_t[::1] out = out_arr
    cdef int64_t[::1] cv = np.ascontiguousarray(np.asarray(col, dtype=np.int64) % p)
    cdef int64_t[::1] al = np.ascontiguousarray(alphabet, dtype=np.int64)
    cdef Py_ssize_t nal = al.shape[0]
    cdef Py_ssize_t v, t, j, si
    cdef int i
    cdef int64_t c
    if m == 0:
        out[0] = cur[0] * nal
        return out_arr
    cdef int64_t *stride = <int64_t *> malloc(m * sizeof(int64_t))
    cdef int *d = <int *> malloc(m * sizeof(int))
    cdef int *td = <int *> malloc(m * sizeof(int))
    try:
        stride[m - 1] = 1
        for i in range(m - 2, -1, -1):
            stride[i] = stride[i + 1] * p
        with nogil:
            for si in range(nal):
                t = 0
                for i in range(m):
                    d[i] = 0
                    td[i] = <int> ((al[si] * cv[i]) % p)
                    t += td[i] * stride[i]
                for v in range(size):
                    c = cur[v]
                    if c != 0:
                        out[t] += c
                    i = m - 1
                    while i >= 0:
                        d[i] += 1
                        td[i] += 1
                        t += stride[i]
                        if td[i] == p:
                            td[i] = 0
                            t -= p * stride[i]
                        if d[i] < p:
                            break
                        d[i] = 0
                        i -= 1
    finally:
        free(stride)
        free(d)
        free(td)
    return out_arr


def scan_combinations(target, rows, int p, int stop_below):
    cdef int64_t[:, ::1] R = np.ascontiguousarray(
        np.asarray(rows, dtype=np.int64).reshape((len(rows), len(target))) % p)
    cdef Py_ssize_t m = R.shape[0]
    cdef Py_ssize_t n = R.shape[1]
    acc_arr = np.ascontiguousarray(target, dtype=np.int64) % p
    cdef int64_t[::1] acc = acc_arr
    # CSR layout of the rows' nonzero entries
    nnz_per = [int(np.count_nonzero(R[i])) for i in range(m)]
    ptr_arr = np.zeros(m + 1, dtype=np.int64)
    ptr_arr[1:] = np.cumsum(nnz_per) if m else []
    cdef int64_t[::1] ptr = ptr_arr
    idx_arr = np.zeros(max(1, int(ptr_arr[m])), dtype=np.int64)
    val_arr = np.zeros(max(1, int(ptr_arr[m])), dtype=np.int64)
    cdef int64_t[::1] idx = idx_arr
    cdef int64_t[::1] val = val_arr
    cdef Py_ssize_t i, z, q
    q = 0
    for i in range(m):
        for z in range(n):
            if R[i, z] != 0:
                idx[q] = z
                val[q] = R[i, z]
                q += 1
    cdef Py_ssize_t nz = 0
    for z in range(n):
        if acc[z] != 0:
            nz += 1
    a_arr = np.zeros(m, dtype=np.int64)
    cdef int64_t[::1] a = a_arr
    cdef Py_ssize_t best = nz
    best_vec = np.zeros(m, dtype=np.int64)
    cdef int64_t[::1] bv = best_vec
    cdef int64_t old, new
    cdef bint done = best < stop_below or m == 0
    with nogil:
        while not done:
            i = m - 1
            while i >= 0:
                a[i] += 1
                for q in range(ptr[i], ptr[i + 1]):
                    z = idx[q]
                    old = acc[z]
                    new = old + val[q]
                    if new >= p:
                        new -= p
                    acc[z] = new
                    nz += (new != 0) - (old != 0)
                if a[i] < p:
                    break
                a[i] = 0
                i -= 1
            if i < 0:
                break
            if nz < best:
                best = nz
                for q in range(m):
                    bv[q] = a[q]
                if best < stop_below:
                    break
    return int(best), tuple(int(x) for x in best_vec)


def mc_count(coef, masks, alphabet, int p, long long samples, seed):
    cdef int64_t[:, ::1] C = np.ascontiguousarray(np.asarray(coef, dtype=np.int64) % p)
    cdef Py_ssize_t k = C.shape[0]
    cdef Py_ssize_t n = C.shape[1]
    cdef int64_t[::1] mk = np.ascontiguousarray(masks, dtype=np.int64).reshape(k)
    cdef int64_t[::1] al = np.ascontiguousarray(alphabet, dtype=np.int64)
    cdef uint64_t size = al.shape[0]
    cdef uint64_t state = (<uint64_t> (int(seed) & 0xFFFFFFFFFFFFFFFF))
    cdef uint64_t threshold = (<uint64_t> 0 - size) % size
    cdef uint64_t r
    nnz_per = [int(np.count_nonzero(np.asarray(C[i]))) for i in range(k)]
    ptr_arr = np.zeros(k + 1, dtype=np.int64)
    if k:
        ptr_arr[1:] = np.cumsum(nnz_per)
    cdef int64_t[::1] ptr = ptr_arr
    idx_arr = np.zeros(max(1, int(ptr_arr[k])), dtype=np.int64)
    val_arr = np.zeros(max(1, int(ptr_arr[k])), dtype=np.int64)
    cdef int64_t[::1] idx = idx_arr
    cdef int64_t[::1] val = val_arr
    cdef Py_ssize_t i, z, q
    q = 0
    for i in range(k):
        for z in range(n):
            if C[i, z] != 0:
                idx[q] = z
                val[q] = C[i, z]
                q += 1
    x_arr = np.zeros(max(1, n), dtype=np.int64)
    cdef int64_t[::1] x = x_arr
    cdef long long hits = 0
    cdef long long s
    cdef int64_t v
    cdef bint ok
    with nogil:
        for s in range(samples):
            for z in range(n):
                while True:
                    state = state + GOLDEN
                    r = _mix64(state)
                    if r >= threshold:
                        break
                x[z] = al[r % size]
            ok = True
            for i in range(k):
                v = 0
                for q in range(ptr[i], ptr[i + 1]):
                    v += val[q] * x[idx[q]]
                v %= p
                if not ((mk[i] >> v) & 1):
                    ok = False
                    break
            if ok:
                hits += 1
    return int(hits)
