# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops. Must stay numerically identical to ``_purepy``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs

cnp.import_array()


cdef inline double cabs2(double complex z) nogil:
    return z.real * z.real + z.imag * z.imag


def jacobi_hermitian(a, double tol, int max_sweeps):
    """Cyclic complex Jacobi. Returns (diagonal, vectors, sweeps, converged)."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] arr = np.array(a, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = arr.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] vec = np.eye(n, dtype=np.complex128)
    cdef double complex[:, ::1] A = arr
    cdef double complex[:, ::1] V = vec
    cdef Py_ssize_t p, q, k
    cdef int sweep
    cdef double g, app, aqq, theta, t, c, s, off, scale = 0.0
    cdef double complex ph, sph, sphc, x, y

    for p in range(n):
        for q in range(n):
            scale += cabs2(A[p, q])
    scale = sqrt(scale)
    if scale < 1.0:
        scale = 1.0

    with nogil:
        for sweep in range(max_sweeps + 1):
            off = 0.0
            for p in range(n):
                for q in range(n):
                    if p != q:
                        off += cabs2(A[p, q])
            if sqrt(off) <= tol * scale:
                break
            if sweep == max_sweeps:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    g = sqrt(cabs2(A[p, q]))
                    if g == 0.0:
                        continue
                    app = A[p, p].real
                    aqq = A[q, q].real
                    theta = (aqq - app) / (2.0 * g)
                    if fabs(theta) > 1e150:
                        t = 0.5 / theta
                    elif theta >= 0.0:
                        t = 1.0 / (theta + sqrt(theta * theta + 1.0))
                    else:
                        t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
                    c = 1.0 / sqrt(1.0 + t * t)
                    s = t * c
                    ph = A[p, q] / g
                    sph = s * ph
                    sphc = s * ph.conjugate()
                    for k in range(n):
                        x = A[k, p]
                        y = A[k, q]
                        A[k, p] = c * x - sphc * y
                        A[k, q] = sph * x + c * y
                    for k in range(n):
                        x = A[p, k]
                        y = A[q, k]
                        A[p, k] = c * x - sph * y
                        A[q, k] = sphc * x + c * y
                    A[p, q] = 0.0
                    A[q, p] = 0.0
                    A[p, p] = app - t * g
                    A[q, q] = aqq + t * g
                    for k in range(n):
                        x = V[k, p]
                        y = V[k, q]
                        V[k, p] = c * x - sphc * y
                        V[k, q] = sph * x + c * y

    diag = np.array([arr[k, k].real for k in range(n)])
    return diag, vec, sweep, sqrt(off) <= tol * scale


def permuted_pairs(Py_ssize_t n_copies, double[:, ::1] uniforms, Py_ssize_t n_pairs):
    """Fisher-Yates shuffle per row of ``uniforms``; emit consecutive pairs."""
    cdef Py_ssize_t runs = uniforms.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=3] out_arr = np.empty((runs, n_pairs, 2), dtype=np.int64)
    cdef cnp.int64_t[:, :, ::1] out = out_arr
    cdef cnp.ndarray[cnp.int64_t, ndim=1] perm_arr = np.empty(n_copies, dtype=np.int64)
    cdef cnp.int64_t[::1] perm = perm_arr
    cdef Py_ssize_t run, i, j, m
    cdef cnp.int64_t tmp
    with nogil:
        for run in range(runs):
            for i in range(n_copies):
                perm[i] = i
            for i in range(n_copies - 1, 0, -1):
                j = <Py_ssize_t>(uniforms[run, i - 1] * (i + 1))
                if j > i:
                    j = i
                tmp = perm[i]
                perm[i] = perm[j]
                perm[j] = tmp
            for m in range(n_pairs):
                out[run, m, 0] = perm[2 * m]
                out[run, m, 1] = perm[2 * m + 1]
    return out_arr


def inverse_cdf(double[::1] cdf, double[::1] uniforms):
    """Index of the first cdf entry strictly above each uniform."""
    cdef Py_ssize_t m = uniforms.shape[0], k = cdf.shape[0], i, j
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out_arr = np.empty(m, dtype=np.int64)
    cdef cnp.int64_t[::1] out = out_arr
    cdef double u
    with nogil:
        for i in range(m):
            u = uniforms[i]
            j = 0
            while j < k - 1 and u >= cdf[j]:
                j += 1
            out[i] = j
    return out_arr
