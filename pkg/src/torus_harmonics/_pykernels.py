"""Pure numpy versions of the compiled kernels in ``_ckernels.pyx``.

Every arc mean and every pair sum is formed with the same operations in the
same order as the compiled version, and taking maxima is exact, so both
backends agree bit for bit.
"""
import numpy as np
from scipy.ndimage import maximum_filter1d


def arc_maximal(a):
    a = np.ascontiguousarray(a, dtype=np.float64)
    m, n = a.shape
    prefix = np.zeros((m, 2 * n + 1))
    prefix[:, 1:] = np.cumsum(np.concatenate([a, a], axis=1), axis=1)
    out = a.copy()
    s = np.arange(n)
    for L in range(1, n + 1):
        avg = (prefix[:, s + L] - prefix[:, s]) / L
        # window of starts [j-L+1, j]
        best = maximum_filter1d(avg, size=L, axis=1, mode="wrap", origin=(L - 1) // 2)
        np.maximum(out, best, out=out)
    return out


def pair_sum(fine, R, w, odd):
    fine = np.ascontiguousarray(fine, dtype=np.float64)
    m, M = fine.shape
    n = M // R
    base = np.arange(n) * R
    acc = np.zeros((m, n))
    sgn = -1.0 if odd else 1.0
    for p in range(len(w)):
        lo = (base - p - 1) % M
        hi = (base + p) % M
        acc = acc + w[p] * (fine[:, lo] + sgn * fine[:, hi])
    return acc
