# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_fallback``."""

from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport malloc, free, qsort


cdef int _cmp_double(const void *p, const void *q) noexcept nogil:
    cdef double x = (<double *>p)[0]
    cdef double y = (<double *>q)[0]
    return (x > y) - (x < y)


def dominance_counts(a, b):
    cdef Py_ssize_t n = len(a), m = len(b), i, lo, hi
    cdef double *xs = <double *>malloc(max(n, 1) * sizeof(double))
    cdef double *ys = <double *>malloc(max(m, 1) * sizeof(double))
    cdef long long greater = 0, less = 0
    if xs == NULL or ys == NULL:
        free(xs)
        free(ys)
        raise MemoryError()
    try:
        for i in range(n):
            xs[i] = a[i]
        for i in range(m):
            ys[i] = b[i]
        with nogil:
            qsort(xs, n, sizeof(double), _cmp_double)
            qsort(ys, m, sizeof(double), _cmp_double)
            # lo: count of ys < x, hi: count of ys <= x; both monotone in x
            lo = 0
            hi = 0
            for i in range(n):
                while lo < m and ys[lo] < xs[i]:
                    lo += 1
                while hi < m and ys[hi] <= xs[i]:
                    hi += 1
                greater += lo
                less += m - hi
    finally:
        free(xs)
        free(ys)
    return int(greater), int(less)


def support_counts(transactions, candidates):
    cdef Py_ssize_t nt = len(transactions), nc = len(candidates), i, j
    cdef uint64_t *ts = <uint64_t *>malloc(max(nt, 1) * sizeof(uint64_t))
    cdef uint64_t cand
    cdef long long count
    if ts == NULL:
        raise MemoryError()
    out = []
    try:
        for i in range(nt):
            ts[i] = transactions[i]
        for j in range(nc):
            cand = candidates[j]
            count = 0
            with nogil:
                for i in range(nt):
                    if ts[i] & cand == cand:
                        count += 1
            out.append(int(count))
    finally:
        free(ts)
    return out


def subset_sum_counts(weights, Py_ssize_t k):
    cdef Py_ssize_t n = len(weights), total = 0, seen = 0, i, j, s, w, width
    for i in range(n):
        total += weights[i]
    width = total + 1
    cdef int64_t *table = <int64_t *>malloc((k + 1) * width * sizeof(int64_t))
    if table == NULL:
        raise MemoryError()
    try:
        for i in range((k + 1) * width):
            table[i] = 0
        table[0] = 1
        for i in range(n):
            w = weights[i]
            seen += w
            with nogil:
                for j in range(min(k, n), 0, -1):
                    for s in range(seen, w - 1, -1):
                        table[j * width + s] += table[(j - 1) * width + s - w]
        return [int(table[k * width + s]) for s in range(width)]
    finally:
        free(table)
