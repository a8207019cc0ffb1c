# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; same signatures as ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint8_t, uint32_t, uint64_t
from libc.stdlib cimport free, malloc, calloc, qsort

cnp.import_array()

cdef extern from *:
    int popcount64 "__builtin_popcountll"(unsigned long long) nogil
    int ctz64 "__builtin_ctzll"(unsigned long long) nogil

# tally via a dense count array up to this many key bits, sort above it
cdef enum:
    DENSE_KEY_BITS = 22


cdef int _cmp_u64(const void* a, const void* b) noexcept nogil:
    cdef uint64_t x = (<const uint64_t*>a)[0]
    cdef uint64_t y = (<const uint64_t*>b)[0]
    return (x > y) - (x < y)


def gf2_matvec(const uint64_t[:, ::1] rows, const uint64_t[::1] s):
    cdef Py_ssize_t n = rows.shape[0], w = rows.shape[1], i, j
    cdef uint64_t acc
    out = np.zeros(n, dtype=np.uint8)
    cdef uint8_t[::1] o = out
    if s.shape[0] != w:
        raise ValueError("row width and vector width differ")
    with nogil:
        for i in range(n):
            acc = 0
            for j in range(w):
                acc ^= rows[i, j] & s[j]
            o[i] = popcount64(acc) & 1
    return out


def guess_tally(rows, int n_cols, known_mask, known_values):
    cdef Py_ssize_t n = len(rows)
    if n > 64 or n_cols > 64:
        raise ValueError("guess_tally handles at most 64 rows and 64 columns")
    cdef uint64_t r[64]
    cdef int free_pos[64]
    cdef Py_ssize_t i
    cdef int j, n_free = 0
    cdef uint64_t kmask = <uint64_t>known_mask
    for i in range(n):
        r[i] = <uint64_t>rows[i]
    for j in range(n_cols):
        if not (kmask >> (n_cols - 1 - j)) & 1:
            free_pos[n_free] = n_cols - 1 - j
            n_free += 1
    if n_free > 40:
        raise ValueError("too many free positions")

    cdef uint64_t s = (<uint64_t>known_values) & kmask
    cdef uint64_t total = (<uint64_t>1) << n_free
    cdef uint64_t x, k, best = 0, arg = 0, support = 0, run, prev
    cdef uint32_t* counts
    cdef uint64_t* keys
    cdef uint64_t size

    if n <= DENSE_KEY_BITS:
        size = (<uint64_t>1) << n
        counts = <uint32_t*>calloc(size, sizeof(uint32_t))
        if counts == NULL:
            raise MemoryError()
        with nogil:
            for x in range(total):
                if x:
                    s ^= (<uint64_t>1) << free_pos[ctz64(x)]
                k = 0
                for i in range(n):
                    k = (k << 1) | (popcount64(r[i] & s) & 1)
                counts[k] += 1
            for k in range(size):
                if counts[k]:
                    support += 1
                    if counts[k] > best:
                        best = counts[k]
                        arg = k
        free(counts)
    else:
        keys = <uint64_t*>malloc(total * sizeof(uint64_t))
        if keys == NULL:
            raise MemoryError()
        with nogil:
            for x in range(total):
                if x:
                    s ^= (<uint64_t>1) << free_pos[ctz64(x)]
                k = 0
                for i in range(n):
                    k = (k << 1) | (popcount64(r[i] & s) & 1)
                keys[x] = k
            qsort(keys, total, sizeof(uint64_t), _cmp_u64)
            run = 0
            prev = keys[0]
            for x in range(total + 1):
                if x < total and keys[x] == prev:
                    run += 1
                    continue
                support += 1
                if run > best:
                    best = run
                    arg = prev
                if x < total:
                    prev = keys[x]
                    run = 1
        free(keys)
    return int(best), int(arg), int(support), int(total)


def count_collisions(int n_rows, int n_cols, x, y):
    if n_rows * n_cols > 40 or n_cols > 63:
        raise ValueError("matrix space too large to enumerate")
    cdef uint64_t total = (<uint64_t>1) << (n_rows * n_cols)
    cdef uint64_t mask = ((<uint64_t>1) << n_cols) - 1
    cdef uint64_t vx = <uint64_t>x, vy = <uint64_t>y, m, row, hits = 0
    cdef int i, ok
    with nogil:
        for m in range(total):
            ok = 1
            for i in range(n_rows):
                row = (m >> (i * n_cols)) & mask
                if (popcount64(row & vx) & 1) != (popcount64(row & vy) & 1):
                    ok = 0
                    break
            hits += ok
    return int(hits)
