# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Must match ``_pykernels`` bit for bit."""
import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()


def arc_maximal(const double[:, ::1] a):
    """Row-wise discrete maximal function over closed circular arcs.

    ``out[r, j]`` is the largest mean of ``a[r, s:s+L]`` (indices mod N) over
    all arcs with ``1 <= L <= N`` that contain ``j``. Node ``s + i`` lies on
    the arc from ``s`` exactly when ``L > i``, so a suffix maximum over ``L``
    per start gives every node's best arc from that start.
    """
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1]
    cdef Py_ssize_t r, s, i, L, j
    out_arr = np.empty((m, n), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double *prefix = <double *> malloc((2 * n + 1) * sizeof(double))
    cdef double *sm = <double *> malloc((n + 1) * sizeof(double))
    cdef double acc, v
    if prefix == NULL or sm == NULL:
        free(prefix); free(sm)
        raise MemoryError()
    try:
        for r in range(m):
            prefix[0] = 0.0
            acc = 0.0
            for i in range(2 * n):
                acc = acc + a[r, i % n]
                prefix[i + 1] = acc
            for j in range(n):
                out[r, j] = a[r, j]
            for s in range(n):
                # sm[i] = max over L > i of the mean of the arc [s, s + L)
                v = (prefix[s + n] - prefix[s]) / n
                sm[n - 1] = v
                for L in range(n - 1, 0, -1):
                    acc = (prefix[s + L] - prefix[s]) / L
                    if acc > v:
                        v = acc
                    sm[L - 1] = v
                for i in range(n - s):
                    if sm[i] > out[r, s + i]:
                        out[r, s + i] = sm[i]
                for i in range(n - s, n):
                    j = s + i - n
                    if sm[i] > out[r, j]:
                        out[r, j] = sm[i]
    finally:
        free(prefix)
        free(sm)
    return out_arr


def pair_sum(const double[:, ::1] fine, Py_ssize_t R, const double[::1] w, bint odd):
    """Symmetric-pair quadrature on an offset fine grid.

    ``fine[r, q]`` samples line ``r`` at ``(q + 1/2) h`` with ``M = R N`` points.
    Returns ``out[r, j] = sum_p w[p] * (fine[r, jR-p-1] -/+ fine[r, jR+p])``,
    minus for odd kernels, plus for even ones.
    """
    cdef Py_ssize_t m = fine.shape[0], M = fine.shape[1]
    cdef Py_ssize_t n = M // R, P = w.shape[0]
    cdef Py_ssize_t r, j, p, lo, hi
    cdef double acc, sgn = -1.0 if odd else 1.0
    out_arr = np.empty((m, n), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    for r in range(m):
        for j in range(n):
            acc = 0.0
            for p in range(P):
                lo = j * R - p - 1
                if lo < 0:
                    lo += M
                hi = j * R + p
                if hi >= M:
                    hi -= M
                acc = acc + w[p] * (fine[r, lo] + sgn * fine[r, hi])
            out[r, j] = acc
    return out_arr
