# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernel: weighted inverse-power distance sums.

Terms are accumulated in ascending order of magnitude to limit cancellation
when the group (and hence the number of centers) is large.
"""

from libc.math cimport INFINITY, sqrt
from libc.stdlib cimport free, malloc
from libcpp.algorithm cimport sort

import numpy as np


cdef inline double _ipow(double base, int e) noexcept nogil:
    cdef double acc = 1.0
    cdef double b = base
    while e > 0:
        if e & 1:
            acc *= b
        b *= b
        e >>= 1
    return acc


def inv_power_sums(const double[:, ::1] points, const double[:, ::1] centers,
                   const double[::1] weights, int power):
    """Return (sums, nearest) for sums[i] = sum_j w[j] / |x_i - c_j|**power."""
    cdef Py_ssize_t m = points.shape[0]
    cdef Py_ssize_t d = points.shape[1]
    cdef Py_ssize_t k = centers.shape[0]
    sums_arr = np.zeros(m, dtype=np.float64)
    near_arr = np.full(m, np.inf, dtype=np.float64)
    if m == 0 or k == 0:
        return sums_arr, near_arr
    if centers.shape[1] != d:
        raise ValueError("points and centers disagree on dimension")
    if weights.shape[0] != k:
        raise ValueError("weights length mismatch")
    cdef double[::1] sums = sums_arr
    cdef double[::1] near = near_arr
    cdef double* buf = <double*> malloc(k * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, j, t
    cdef double acc, diff, dist, best, tot
    try:
        with nogil:
            for i in range(m):
                best = INFINITY
                for j in range(k):
                    acc = 0.0
                    for t in range(d):
                        diff = points[i, t] - centers[j, t]
                        acc += diff * diff
                    dist = sqrt(acc)
                    if dist < best:
                        best = dist
                    buf[j] = weights[j] / _ipow(dist, power)
                sort(buf, buf + k)
                tot = 0.0
                for j in range(k):
                    tot += buf[j]
                sums[i] = tot
                near[i] = best
    finally:
        free(buf)
    return sums_arr, near_arr
