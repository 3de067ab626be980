# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled merge-count kernel for inversion counting.

Counts pairs i < j with seq[i] > seq[j] (strict inversions) via bottom-up
merge sort.  This is the hot inner loop behind concordant/discordant pair
counting; everything around it vectorizes with numpy and stays in Python.
"""

import numpy as np


cdef unsigned long long _merge(long long* src, long long* dst,
                               Py_ssize_t lo, Py_ssize_t mid, Py_ssize_t hi) noexcept nogil:
    cdef Py_ssize_t i = lo, j = mid, k = lo
    cdef unsigned long long inv = 0
    while i < mid and j < hi:
        if src[i] <= src[j]:
            dst[k] = src[i]
            i += 1
        else:
            # src[i] > src[j]: src[j] is smaller than all remaining left elements
            dst[k] = src[j]
            j += 1
            inv += mid - i
        k += 1
    while i < mid:
        dst[k] = src[i]
        i += 1
        k += 1
    while j < hi:
        dst[k] = src[j]
        j += 1
        k += 1
    return inv


def count_inversions(seq):
    """Number of strict inversions in an integer sequence."""
    arr = np.ascontiguousarray(seq, dtype=np.int64).copy()
    tmp = np.empty_like(arr)
    cdef long long[::1] a = arr
    cdef long long[::1] b = tmp
    cdef Py_ssize_t m = a.shape[0]
    if m < 2:
        return 0
    cdef unsigned long long total = 0
    cdef Py_ssize_t width = 1, lo, mid, hi
    cdef long long* src
    cdef long long* dst
    cdef long long* swap
    with nogil:
        src = &a[0]
        dst = &b[0]
        while width < m:
            lo = 0
            while lo < m:
                mid = lo + width
                if mid > m:
                    mid = m
                hi = lo + 2 * width
                if hi > m:
                    hi = m
                total += _merge(src, dst, lo, mid, hi)
                lo = hi
            swap = src
            src = dst
            dst = swap
            width *= 2
    return int(total)
