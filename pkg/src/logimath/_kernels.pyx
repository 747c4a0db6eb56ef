# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops. Must stay numerically identical to _kernels_py."""

from libc.math cimport fabs
from libc.stdlib cimport malloc, free


def tricomi_series(const double[::1] z, double nu, double first_term,
                   double rel_tol, int max_terms, double[::1] out):
    cdef Py_ssize_t i, n = z.shape[0]
    cdef int count
    cdef double s, term, zi
    cdef bint ok
    for i in range(n):
        zi = z[i]
        term = first_term
        s = term
        count = 1
        ok = False
        while True:
            term = term * zi / (count * (nu + count))
            if term == 0.0 or fabs(term) < rel_tol * fabs(s):
                ok = True
                break
            if count >= max_terms:
                break
            s += term
            count += 1
        if not ok:
            return i
        out[i] = s
    return -1


def laguerre_cn(double[::1] F, const double[::1] x, double dt, int nsteps,
                double theta):
    cdef Py_ssize_t n = F.shape[0], j
    cdef int step
    cdef double *cl = <double *> malloc(n * sizeof(double))
    cdef double *cu = <double *> malloc(n * sizeof(double))
    cdef double *cp = <double *> malloc(n * sizeof(double))
    cdef double *den = <double *> malloc(n * sizeof(double))
    cdef double *rhs = <double *> malloc(n * sizeof(double))
    cdef double w, hl, hr, a, b, c, lf
    if cl == NULL or cu == NULL or cp == NULL or den == NULL or rhs == NULL:
        free(cl); free(cu); free(cp); free(den); free(rhs)
        raise MemoryError()
    try:
        for j in range(n):
            cl[j] = 0.0
            cu[j] = 0.0
            if j == 0:
                hr = x[1] - x[0]
                w = 0.5 * hr
            elif j == n - 1:
                hl = x[j] - x[j - 1]
                w = 0.5 * hl
            else:
                hl = x[j] - x[j - 1]
                hr = x[j + 1] - x[j]
                w = 0.5 * (hl + hr)
            if j > 0:
                cl[j] = 0.5 * (x[j] + x[j - 1]) / (hl * w)
            if j < n - 1:
                cu[j] = 0.5 * (x[j] + x[j + 1]) / (hr * w)
        # constant tridiagonal matrix: factor once
        for j in range(n):
            a = -theta * dt * cl[j]
            b = 1.0 + theta * dt * (cl[j] + cu[j])
            c = -theta * dt * cu[j]
            if j == 0:
                den[j] = b
            else:
                den[j] = b - a * cp[j - 1]
            cp[j] = c / den[j]
        for step in range(nsteps):
            for j in range(n):
                lf = 0.0
                if j > 0:
                    lf += cl[j] * (F[j - 1] - F[j])
                if j < n - 1:
                    lf += cu[j] * (F[j + 1] - F[j])
                rhs[j] = F[j] + (1.0 - theta) * dt * lf
            rhs[0] = rhs[0] / den[0]
            for j in range(1, n):
                rhs[j] = (rhs[j] + theta * dt * cl[j] * rhs[j - 1]) / den[j]
            F[n - 1] = rhs[n - 1]
            for j in range(n - 2, -1, -1):
                F[j] = rhs[j] - cp[j] * F[j + 1]
    finally:
        free(cl); free(cu); free(cp); free(den); free(rhs)
