# cython: language_level=3
"""Cyclic Jacobi diagonalization of small complex Hermitian matrices (Cython)."""
import numpy as np

cimport cython
from libc.math cimport sqrt, hypot, fabs


cdef double _off_norm(double complex[:, ::1] a, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double s = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                s += a[i, j].real * a[i, j].real + a[i, j].imag * a[i, j].imag
    return sqrt(s)


@cython.boundscheck(False)
@cython.wraparound(False)
cdef int _diagonalize(double complex[:, ::1] a, double complex[:, ::1] v,
                      double tol, int max_sweeps, double *off_out) noexcept nogil:
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, j, k, p, q
    cdef double fro = 0.0, off, r, app, aqq, theta, t, c, s
    cdef double complex w, wc, sw, swc, x, y

    for i in range(n):
        for j in range(n):
            v[i, j] = 1.0 if i == j else 0.0
            fro += a[i, j].real * a[i, j].real + a[i, j].imag * a[i, j].imag
    fro = sqrt(fro)
    for i in range(n):
        a[i, i] = a[i, i].real

    off = _off_norm(a, n)
    if fro == 0.0 or off <= tol * fro:
        off_out[0] = off
        return 0

    cdef int sweeps = 0
    while sweeps < max_sweeps:
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                r = hypot(a[p, q].real, a[p, q].imag)
                if r == 0.0:
                    continue
                w = a[p, q] / r
                wc = w.real - 1j * w.imag
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * r)
                t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                sw = s * w
                swc = s * wc
                for k in range(n):
                    x = a[k, p]
                    y = a[k, q]
                    a[k, p] = c * x - swc * y
                    a[k, q] = sw * x + c * y
                for k in range(n):
                    x = a[p, k]
                    y = a[q, k]
                    a[p, k] = c * x - sw * y
                    a[q, k] = swc * x + c * y
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = app - t * r
                a[q, q] = aqq + t * r
                for k in range(n):
                    x = v[k, p]
                    y = v[k, q]
                    v[k, p] = c * x - swc * y
                    v[k, q] = sw * x + c * y
        off = _off_norm(a, n)
        if off <= tol * fro:
            break
    off_out[0] = off
    return sweeps


def jacobi_eigh(a, double tol=1e-15, int max_sweeps=50):
    """Eigen-decompose one Hermitian matrix.

    Returns unsorted eigenvalues, eigenvector columns, sweeps used and the
    final off-diagonal Frobenius norm.
    """
    cdef double complex[:, ::1] work = np.array(a, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = work.shape[0]
    vec = np.empty((n, n), dtype=np.complex128)
    cdef double complex[:, ::1] v = vec
    cdef double off = 0.0
    cdef int sweeps
    with nogil:
        sweeps = _diagonalize(work, v, tol, max_sweeps, &off)
    w = np.array([work[i, i].real for i in range(n)])
    return w, vec, sweeps, off


def jacobi_eigh_batch(a, double tol=1e-15, int max_sweeps=50):
    """Batched version of :func:`jacobi_eigh` over a ``(m, n, n)`` stack."""
    stack = np.array(a, dtype=np.complex128, order="C", copy=True)
    cdef double complex[:, :, ::1] work = stack
    cdef Py_ssize_t m = work.shape[0], n = work.shape[1], k, i
    vec = np.empty((m, n, n), dtype=np.complex128)
    cdef double complex[:, :, ::1] v = vec
    vals = np.empty((m, n))
    cdef double[:, ::1] w = vals
    sweep_arr = np.empty(m, dtype=np.int64)
    cdef long long[::1] sw = sweep_arr
    off_arr = np.empty(m)
    cdef double[::1] off = off_arr
    with nogil:
        for k in range(m):
            sw[k] = _diagonalize(work[k], v[k], tol, max_sweeps, &off[k])
            for i in range(n):
                w[k, i] = work[k, i, i].real
    return vals, vec, sweep_arr, off_arr
