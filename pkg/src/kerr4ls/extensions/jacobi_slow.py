"""Cyclic Jacobi diagonalization of small complex Hermitian matrices (pure Python)."""
import math

import numpy as np


def _off_norm(a, n):
    s = 0.0
    for i in range(n):
        row = a[i]
        for j in range(n):
            if i != j:
                z = row[j]
                s += z.real * z.real + z.imag * z.imag
    return math.sqrt(s)


def _diagonalize(a, n, tol, max_sweeps):
    """Diagonalize the nested list ``a`` in place.

    Returns ``(vectors, sweeps, off)`` where ``vectors`` is a nested list
    holding the eigenvectors as columns.
    """
    v = [[1.0 + 0.0j if i == j else 0.0j for j in range(n)] for i in range(n)]
    fro = math.sqrt(sum(abs(z) ** 2 for row in a for z in row))
    for i in range(n):
        a[i][i] = complex(a[i][i].real, 0.0)
    off = _off_norm(a, n)
    if fro == 0.0 or off <= tol * fro:
        return v, 0, off

    sweeps = 0
    while sweeps < max_sweeps:
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                r = math.hypot(apq.real, apq.imag)
                if r == 0.0:
                    continue
                w = apq / r
                wc = w.conjugate()
                app = a[p][p].real
                aqq = a[q][q].real
                theta = (aqq - app) / (2.0 * r)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                sw = s * w
                swc = s * wc
                # A <- A U
                for k in range(n):
                    akp = a[k][p]
                    akq = a[k][q]
                    a[k][p] = c * akp - swc * akq
                    a[k][q] = sw * akp + c * akq
                # A <- U^H A
                rp = a[p]
                rq = a[q]
                for k in range(n):
                    apk = rp[k]
                    aqk = rq[k]
                    rp[k] = c * apk - sw * aqk
                    rq[k] = swc * apk + c * aqk
                a[p][q] = 0.0j
                a[q][p] = 0.0j
                a[p][p] = complex(app - t * r, 0.0)
                a[q][q] = complex(aqq + t * r, 0.0)
                # V <- V U
                for k in range(n):
                    vk = v[k]
                    vkp = vk[p]
                    vkq = vk[q]
                    vk[p] = c * vkp - swc * vkq
                    vk[q] = sw * vkp + c * vkq
        off = _off_norm(a, n)
        if off <= tol * fro:
            break
    return v, sweeps, off


def jacobi_eigh(a, tol=1e-15, max_sweeps=50):
    """Eigen-decompose one Hermitian matrix.

    Returns unsorted eigenvalues, eigenvector columns, the number of sweeps
    used and the final off-diagonal Frobenius norm. The caller decides what
    to do when ``off`` is still above tolerance.
    """
    a = np.asarray(a, dtype=np.complex128)
    n = a.shape[0]
    work = a.tolist()
    v, sweeps, off = _diagonalize(work, n, tol, max_sweeps)
    w = np.array([work[i][i].real for i in range(n)])
    return w, np.array(v, dtype=np.complex128), sweeps, off


def jacobi_eigh_batch(a, tol=1e-15, max_sweeps=50):
    """Batched version of :func:`jacobi_eigh` over a ``(m, n, n)`` stack."""
    a = np.asarray(a, dtype=np.complex128)
    m, n, _ = a.shape
    w = np.empty((m, n))
    v = np.empty((m, n, n), dtype=np.complex128)
    sweeps = np.empty(m, dtype=np.int64)
    off = np.empty(m)
    for k in range(m):
        w[k], v[k], sweeps[k], off[k] = jacobi_eigh(a[k], tol, max_sweeps)
    return w, v, sweeps, off
