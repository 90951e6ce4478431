# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the hot loops in ``_kernels_py``.

Saturated CDF arguments (|x| > 8) short-circuit to 0/1 so the inner
product loop skips most erfc calls at small noise levels.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport erfc, floor

cnp.import_array()

cdef double _SQRT1_2 = 0.7071067811865476
cdef double _SAT = 8.0


cdef inline double _phi(double x) nogil:
    return 0.5 * erfc(-x * _SQRT1_2)


def max_exceedance_probs(
    cnp.ndarray[cnp.float64_t, ndim=2] offsets not None,
    cnp.ndarray[cnp.float64_t, ndim=1] shifts not None,
    double node_scale,
    cnp.ndarray[cnp.float64_t, ndim=1] nodes not None,
    cnp.ndarray[cnp.float64_t, ndim=1] weights not None,
):
    """See ``_kernels_py.max_exceedance_probs``."""
    cdef Py_ssize_t m = offsets.shape[0]
    cdef Py_ssize_t n = offsets.shape[1]
    cdef Py_ssize_t g_count = nodes.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(m, dtype=np.float64)
    cdef Py_ssize_t i, j, g
    cdef double acc, prod, arg, center
    with nogil:
        for i in range(m):
            acc = 0.0
            for g in range(g_count):
                center = shifts[i] + node_scale * nodes[g]
                prod = 1.0
                for j in range(n):
                    arg = offsets[i, j] - center
                    if arg <= -_SAT:
                        prod = 0.0
                        break
                    if arg < _SAT:
                        prod *= _phi(arg)
                        if prod == 0.0:
                            break
                acc += weights[g] * prod
            out[i] = 1.0 - acc
    return out


def binned_counts(
    cnp.ndarray[cnp.float64_t, ndim=1] values not None,
    cnp.ndarray[cnp.uint8_t, ndim=1] successes not None,
    double half_width,
    Py_ssize_t nbins,
):
    """See ``_kernels_py.binned_counts``."""
    cdef Py_ssize_t m = values.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] totals = np.zeros(nbins + 2, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] hits = np.zeros(nbins + 2, dtype=np.float64)
    cdef double scale = nbins / (2.0 * half_width)
    cdef Py_ssize_t i, cell
    cdef double raw
    with nogil:
        for i in range(m):
            raw = floor((values[i] + half_width) * scale)
            if raw < -1.0:
                raw = -1.0
            elif raw > <double> nbins:
                raw = <double> nbins
            cell = <Py_ssize_t> raw + 1
            totals[cell] += 1.0
            if successes[i]:
                hits[cell] += 1.0
    return totals, hits
