# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled twins of the hot loops in dzw._kernels_py.

Same function signatures, same Neumaier compensation, same summation order;
selected at import by dzw._backend when built.
"""

import numpy as np

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)

cdef extern from "math.h" nogil:
    double fabs(double)


BACKEND_NAME = "cython"


def exp_dirichlet_sum(weights, lengths, s):
    """Compensated sum of ``w_j * exp(-s * L_j)`` in array order."""
    cdef double complex[::1] w = np.ascontiguousarray(weights, dtype=np.complex128)
    cdef double[::1] L = np.ascontiguousarray(lengths, dtype=np.float64)
    cdef double complex sc = s
    cdef double sr = 0.0, si = 0.0, cr = 0.0, ci = 0.0
    cdef double x, y, tmp
    cdef double complex t
    cdef Py_ssize_t j, n = w.shape[0]
    if L.shape[0] != n:
        raise ValueError("weights and lengths must have equal size")
    for j in range(n):
        t = w[j] * cexp(-sc * L[j])
        x = t.real
        tmp = sr + x
        if fabs(sr) >= fabs(x):
            cr += (sr - tmp) + x
        else:
            cr += (x - tmp) + sr
        sr = tmp
        y = t.imag
        tmp = si + y
        if fabs(si) >= fabs(y):
            ci += (si - tmp) + y
        else:
            ci += (y - tmp) + si
        si = tmp
    return complex(sr + cr, si + ci)


def sym_power_row_sums(eigenvalues, kmax, nmax):
    """Row sums ``S_k = sum_{N=0}^{nmax} h_N(x^k)`` for k = 1..kmax."""
    cdef double complex[::1] x = np.ascontiguousarray(eigenvalues, dtype=np.complex128)
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t km = kmax, nm = nmax
    cdef Py_ssize_t k, i, j, m
    out = []
    if n == 0 or nm == 0:
        return [1.0 + 0.0j] * km
    cdef double complex[::1] y = np.ones(n, dtype=np.complex128)
    cdef double complex[::1] run = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] p = np.empty(nm + 1, dtype=np.complex128)
    cdef double complex[::1] h = np.empty(nm + 1, dtype=np.complex128)
    cdef double complex acc
    cdef double sr, si, cr, ci, xr, xi, tmp
    for k in range(1, km + 1):
        for j in range(n):
            y[j] = y[j] * x[j]
            run[j] = y[j]
        for i in range(1, nm + 1):
            acc = 0.0 + 0.0j
            for j in range(n):
                acc = acc + run[j]
            p[i] = acc
            if i < nm:
                for j in range(n):
                    run[j] = run[j] * y[j]
        h[0] = 1.0 + 0.0j
        for m in range(1, nm + 1):
            acc = 0.0 + 0.0j
            for i in range(1, m + 1):
                acc = acc + p[i] * h[m - i]
            h[m] = acc / m
        sr = 0.0
        si = 0.0
        cr = 0.0
        ci = 0.0
        for m in range(nm + 1):
            xr = h[m].real
            tmp = sr + xr
            if fabs(sr) >= fabs(xr):
                cr += (sr - tmp) + xr
            else:
                cr += (xr - tmp) + sr
            sr = tmp
            xi = h[m].imag
            tmp = si + xi
            if fabs(si) >= fabs(xi):
                ci += (si - tmp) + xi
            else:
                ci += (xi - tmp) + si
            si = tmp
        out.append(complex(sr + cr, si + ci))
    return out
