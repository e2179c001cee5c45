# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled backend for the outgoing Hankel kernels.

Scalar-loop twin of ``_specfun_pure``: ascending series in C long double
below the fixed crossover, truncated outgoing asymptotics above.  Selected
at import by ``elastosrc.specfun`` when available.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport M_PI, cos, fabsl, logl, sin, sqrt

cnp.import_array()

cdef double EULER = 0.57721566490153286061
cdef double CROSSOVER = 21.0
cdef int ASYM_TERMS = 8
cdef int SERIES_CAP = 60
cdef long double SERIES_TOL = 1e-18

cdef long double PSI[66]
cdef long double FACT[4]

PSI[0] = 0.0
cdef int _p
for _p in range(1, 66):
    PSI[_p] = PSI[_p - 1] + (<long double>1.0) / _p
FACT[0] = 1.0
for _p in range(1, 4):
    FACT[_p] = FACT[_p - 1] * _p

# Asymptotic coefficients a_j^(n) = (i/2)^j sqrt(2/pi) (n, j).
cdef double complex AJ[4][9]
cdef int _n, _j
cdef double complex _c
cdef double _prod
for _n in range(4):
    _prod = 1.0
    _c = sqrt(2.0 / M_PI)
    for _j in range(9):
        AJ[_n][_j] = _c * _prod
        _prod *= (4.0 * _n * _n - (2 * _j + 1) ** 2) / (4.0 * (_j + 1))
        _c = _c * 0.5j


cdef double complex series_scalar(int n, double t) noexcept nogil:
    cdef long double half = 0.5 * t
    cdef long double q = half * half
    cdef long double term = 1.0
    cdef long double sumj, sump, fin, y
    cdef int p, k

    for k in range(n):
        term *= half
    term /= FACT[n]
    sumj = term
    sump = term * PSI[n]

    for p in range(1, SERIES_CAP + 1):
        term *= -q / (p * (n + p))
        sumj += term
        sump += term * (PSI[p + n] + PSI[p])
        if fabsl(term) <= SERIES_TOL * (fabsl(sumj) + <long double>1e-300):
            break

    fin = 0.0
    cdef long double two_over_t = (<long double>2.0) / t
    cdef long double pw
    for p in range(n):
        pw = 1.0
        for k in range(n - 2 * p):
            pw *= two_over_t
        for k in range(2 * p - n):
            pw /= two_over_t
        fin += FACT[n - 1 - p] / FACT[p] * pw

    y = ((<long double>2.0) / M_PI) * (logl(half) + <long double>EULER) * sumj \
        - fin / M_PI - sump / M_PI
    return <double>sumj + 1j * <double>y


cdef double complex asym_scalar(int n, int nterms, double x) noexcept nogil:
    cdef double inv = 1.0 / x
    cdef double complex acc = AJ[n][nterms]
    cdef int j
    for j in range(nterms - 1, -1, -1):
        acc = acc * inv + AJ[n][j]
    cdef double phase = x - (0.5 * n + 0.25) * M_PI
    return sqrt(inv) * (cos(phase) + 1j * sin(phase)) * acc


def hankel1_arr(int n, t):
    """H_n^(1) on a positive float64 array, switching at the fixed crossover."""
    cdef cnp.ndarray[double, ndim=1] tv = \
        np.ascontiguousarray(t, dtype=np.float64).ravel()
    cdef cnp.ndarray[double complex, ndim=1] out = \
        np.empty(tv.shape[0], dtype=np.complex128)
    cdef Py_ssize_t i, m = tv.shape[0]
    with nogil:
        for i in range(m):
            if tv[i] < CROSSOVER:
                out[i] = series_scalar(n, tv[i])
            else:
                out[i] = asym_scalar(n, ASYM_TERMS, tv[i])
    return out.reshape(np.shape(t))


def hankel1_asym_eval(int n, int num_terms, x):
    """Truncated outgoing asymptotic expansion on a float64 array."""
    if num_terms > ASYM_TERMS or n > 3:
        raise ValueError("compiled backend tabulates orders 0..3, terms 0..8")
    cdef cnp.ndarray[double, ndim=1] xv = \
        np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef cnp.ndarray[double complex, ndim=1] out = \
        np.empty(xv.shape[0], dtype=np.complex128)
    cdef Py_ssize_t i, m = xv.shape[0]
    with nogil:
        for i in range(m):
            out[i] = asym_scalar(n, num_terms, xv[i])
    return out.reshape(np.shape(x))
