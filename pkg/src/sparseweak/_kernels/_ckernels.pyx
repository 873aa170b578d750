# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: fused suffix-max sweeps, range accumulation, and
the O(n^2) fractional-integral assembly."""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, pow

cnp.import_array()

BACKEND = "compiled"


def suffix_max_box(avgs, want_box=True):
    """See _pykernels.suffix_max_box; identical contract."""
    cdef Py_ssize_t klev = len(avgs) - 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] t = np.array(avgs[klev], dtype=np.float64, copy=True)
    cdef Py_ssize_t n = t.shape[0]
    box = [None] * (klev + 1) if want_box else None
    if want_box:
        box[klev] = t.copy()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] a
    cdef cnp.ndarray[cnp.float64_t, ndim=1] b
    cdef double[::1] tv = t
    cdef double[::1] av
    cdef double[::1] bv
    cdef Py_ssize_t j, m, i, base, blk, nm
    cdef double amax, s
    for j in range(klev - 1, -1, -1):
        a = np.ascontiguousarray(avgs[j], dtype=np.float64)
        av = a
        nm = a.shape[0]
        blk = n // nm
        if want_box:
            b = np.empty(nm, dtype=np.float64)
            bv = b
            for m in range(nm):
                base = m * blk
                amax = av[m]
                s = 0.0
                for i in range(blk):
                    if tv[base + i] < amax:
                        tv[base + i] = amax
                    s += tv[base + i]
                bv[m] = s
            box[j] = b
        else:
            for m in range(nm):
                base = m * blk
                amax = av[m]
                for i in range(blk):
                    if tv[base + i] < amax:
                        tv[base + i] = amax
    return t, box


def range_add(Py_ssize_t n, starts, stops, coeffs):
    """Sum of coeff * 1_[start, stop) over ranges, as a length-n array."""
    cdef cnp.ndarray[cnp.int64_t, ndim=1] st = np.ascontiguousarray(starts, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] sp = np.ascontiguousarray(stops, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cf = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] diff = np.zeros(n + 1, dtype=np.float64)
    cdef double[::1] dv = diff
    cdef Py_ssize_t i, nr = st.shape[0]
    for i in range(nr):
        dv[st[i]] += cf[i]
        dv[sp[i]] -= cf[i]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    cdef double acc = 0.0
    for i in range(n):
        acc += dv[i]
        ov[i] = acc
    return out


def frac_integral_1d(f, double alpha, xs):
    """See _pykernels.frac_integral_1d; identical contract."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] fv = np.ascontiguousarray(f, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xv = np.ascontiguousarray(xs, dtype=np.float64)
    cdef Py_ssize_t n = fv.shape[0], nx = xv.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(nx, dtype=np.float64)
    cdef double[::1] fm = fv, xm = xv, om = out
    cdef double inv_n = 1.0 / n, inv_a = 1.0 / alpha
    cdef Py_ssize_t i, j
    cdef double x, acc, d, gprev, gcur
    with nogil:
        for i in range(nx):
            x = xm[i]
            d = -x
            gprev = (1.0 if d > 0 else -1.0) * pow(fabs(d), alpha) * inv_a
            acc = 0.0
            for j in range(n):
                d = (j + 1) * inv_n - x
                gcur = (1.0 if d > 0 else -1.0) * pow(fabs(d), alpha) * inv_a
                acc += fm[j] * (gcur - gprev)
                gprev = gcur
            om[i] = acc
    return out
