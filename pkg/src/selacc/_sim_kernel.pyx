# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled trial-assembly kernels.

Same contract as _sim_fallback; see its module docstring.  The exact-count
kernel finds each trial's error rows with a quickselect over (u, index)
pairs: the comparator is total, so the selected set equals the first
n_wrong entries of numpy's stable argsort, which is all the fallback
consumes (error positions form a set; their order never matters).
"""

from libc.stdlib cimport malloc, free

import numpy as np

BACKEND_NAME = "compiled"


cdef inline bint _pair_less(double av, long long ai, double bv, long long bi) noexcept nogil:
    return av < bv or (av == bv and ai < bi)


cdef void _select_smallest(double* vals, long long* idxs, Py_ssize_t n,
                           Py_ssize_t k) noexcept nogil:
    """Partition so the k lexicographically smallest (val, idx) pairs
    occupy positions [0, k).  Iterative Hoare quickselect with a
    median-of-three pivot; pairs are distinct because indices are."""
    cdef Py_ssize_t lo = 0, hi = n - 1, i, j, mid
    cdef double pv, tv
    cdef long long pi, ti
    while lo < hi:
        mid = lo + (hi - lo) // 2
        # order (lo, mid, hi) samples so the median lands at mid
        if _pair_less(vals[mid], idxs[mid], vals[lo], idxs[lo]):
            tv = vals[lo]; ti = idxs[lo]
            vals[lo] = vals[mid]; idxs[lo] = idxs[mid]
            vals[mid] = tv; idxs[mid] = ti
        if _pair_less(vals[hi], idxs[hi], vals[lo], idxs[lo]):
            tv = vals[lo]; ti = idxs[lo]
            vals[lo] = vals[hi]; idxs[lo] = idxs[hi]
            vals[hi] = tv; idxs[hi] = ti
        if _pair_less(vals[hi], idxs[hi], vals[mid], idxs[mid]):
            tv = vals[mid]; ti = idxs[mid]
            vals[mid] = vals[hi]; idxs[mid] = idxs[hi]
            vals[hi] = tv; idxs[hi] = ti
        pv = vals[mid]; pi = idxs[mid]
        i = lo; j = hi
        while i <= j:
            while _pair_less(vals[i], idxs[i], pv, pi):
                i += 1
            while _pair_less(pv, pi, vals[j], idxs[j]):
                j -= 1
            if i <= j:
                tv = vals[i]; ti = idxs[i]
                vals[i] = vals[j]; idxs[i] = idxs[j]
                vals[j] = tv; idxs[j] = ti
                i += 1
                j -= 1
        # [lo, j] <= pivot <= [i, hi]; anything between equals the pivot
        if k <= j:
            hi = j
        elif k >= i:
            lo = i
        else:
            return


def exact_count_picks(double[:, ::1] u, double[:, ::1] v, long long[::1] best,
                      long long[::1] cand_flat, long long[::1] cand_off,
                      long long n_wrong):
    cdef Py_ssize_t trials = u.shape[0]
    cdef Py_ssize_t n = u.shape[1]
    sel_arr = np.empty((trials, n), dtype=np.int64)
    cdef long long[:, ::1] sel = sel_arr
    cdef double* vals = <double*> malloc(n * sizeof(double))
    cdef long long* idxs = <long long*> malloc(n * sizeof(long long))
    if vals == NULL or idxs == NULL:
        free(vals)
        free(idxs)
        raise MemoryError()
    cdef Py_ssize_t t, i, j, k = <Py_ssize_t> n_wrong
    cdef long long base, width, q
    try:
        with nogil:
            for t in range(trials):
                for i in range(n):
                    sel[t, i] = best[i]
                if k <= 0:
                    continue
                for i in range(n):
                    vals[i] = u[t, i]
                    idxs[i] = i
                if k < n:
                    _select_smallest(vals, idxs, n, k)
                for j in range(k):
                    i = <Py_ssize_t> idxs[j]
                    base = cand_off[i]
                    width = cand_off[i + 1] - base
                    if width > 0:
                        q = <long long> (v[t, i] * width)
                        if q >= width:
                            q = width - 1
                        if q < 0:
                            q = 0
                        sel[t, i] = cand_flat[base + q]
    finally:
        free(vals)
        free(idxs)
    return sel_arr


def bernoulli_picks(double[:, ::1] u, double[:, ::1] v, double accuracy,
                    long long[::1] best, long long[::1] cand_flat,
                    long long[::1] cand_off):
    cdef Py_ssize_t trials = u.shape[0]
    cdef Py_ssize_t n = u.shape[1]
    sel_arr = np.empty((trials, n), dtype=np.int64)
    cdef long long[:, ::1] sel = sel_arr
    cdef Py_ssize_t t, i
    cdef long long base, width, q
    with nogil:
        for t in range(trials):
            for i in range(n):
                sel[t, i] = best[i]
                if u[t, i] >= accuracy:
                    base = cand_off[i]
                    width = cand_off[i + 1] - base
                    if width > 0:
                        q = <long long> (v[t, i] * width)
                        if q >= width:
                            q = width - 1
                        if q < 0:
                            q = 0
                        sel[t, i] = cand_flat[base + q]
    return sel_arr
