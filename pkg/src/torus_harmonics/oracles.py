"""Brute-force references for the test and acceptance suites.

Nothing here calls the FFT paths, the compiled kernels or the Luxemburg
solver it is meant to check. Coefficients come from the literal quadrature
sum, kernels are summed node by node, and maximal functions enumerate every
arc.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .torus import SampledField


@dataclass(frozen=True)
class OracleConfig:
    oversample: int = 8
    direct_sum_cap: int = 1 << 26

    def __post_init__(self):
        if self.oversample < 4:
            raise ValueError("oversample must be >= 4")


DEFAULT_CONFIG = OracleConfig()


def _nodes(N):
    return np.arange(N) * (2 * math.pi / N)


def _analysis_matrix(N, ks):
    """Rows ``e^{-i k x_j} / N`` for the literal coefficient sum."""
    return np.exp(-1j * np.outer(ks, _nodes(N))) / N


def _contract(arr, mats):
    """Apply ``mats[axis]`` along every axis of ``arr``."""
    out = arr
    for axis, m in enumerate(mats):
        out = np.moveaxis(np.tensordot(m, out, axes=([1], [axis])), 0, axis)
    return out


def _axis_factor(ks, bound, weights, conjugate):
    a = np.abs(ks)
    if weights == "box":
        w = (a <= bound).astype(np.float64)
    elif weights == "modified":
        w = np.array([1.0 if v < bound else (0.5 if v == bound else 0.0) for v in a])
    else:
        raise ValueError(f"unknown weights {weights!r}")
    if conjugate:
        return w * np.array([-1j * (1 if k > 0 else (-1 if k < 0 else 0)) for k in ks])
    return w.astype(np.complex128)


def direct_partial_sum(f: SampledField, window: Sequence[int] | int,
                       weights: str = "box", conjugate: bool = False,
                       config: OracleConfig = DEFAULT_CONFIG) -> SampledField:
    """Literal ``sum_k m(k) a_k e^{ik.x}`` over the window, with ``a_k`` from direct sums."""
    d, N = f.grid.dimension, f.grid.points_per_axis
    bounds = (int(window),) * d if np.isscalar(window) else tuple(int(v) for v in window)
    cost = N ** d * int(np.prod([2 * b + 1 for b in bounds]))
    if cost > config.direct_sum_cap:
        raise ValueError(f"direct summation cost {cost} exceeds cap {config.direct_sum_cap}")
    ks = [np.arange(-b, b + 1) for b in bounds]
    coeffs = _contract(f.values.astype(np.complex128), [_analysis_matrix(N, k) for k in ks])
    for axis, (k, b) in enumerate(zip(ks, bounds)):
        shape = [1] * d
        shape[axis] = k.size
        coeffs = coeffs * _axis_factor(k, b, weights, conjugate).reshape(shape)
    synth = [np.exp(1j * np.outer(_nodes(N), k)) for k in ks]
    out = _contract(coeffs, synth)
    return f.with_values(out.real)


def naive_point_value(f: SampledField, window: Sequence[int] | int, node: Sequence[int],
                      weights: str = "box", conjugate: bool = False) -> float:
    """Per-node triple loop: coefficients and synthesis written out term by term."""
    d, N = f.grid.dimension, f.grid.points_per_axis
    bounds = (int(window),) * d if np.isscalar(window) else tuple(int(v) for v in window)
    x = [node[i] * 2 * math.pi / N for i in range(d)]
    grid_pts = list(np.ndindex(*f.grid.shape))
    flat = f.values
    total = 0j
    for k in np.ndindex(*[2 * b + 1 for b in bounds]):
        kk = [k[i] - bounds[i] for i in range(d)]
        m = 1 + 0j
        for i in range(d):
            m *= complex(_axis_factor(np.array([kk[i]]), bounds[i], weights, conjugate)[0])
        if m == 0:
            continue
        a = 0j
        for p in grid_pts:
            phase = sum(kk[i] * p[i] * 2 * math.pi / N for i in range(d))
            a += flat[p] * complex(math.cos(phase), -math.sin(phase))
        a /= N ** d
        phase = sum(kk[i] * x[i] for i in range(d))
        total += m * a * complex(math.cos(phase), math.sin(phase))
    return total.real


def _line_interpolant(lines: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Evaluate the trig interpolant of each row of ``lines`` at points ``ys``."""
    N = lines.shape[-1]
    ks = np.arange(-N // 2, N // 2)
    coef = lines.astype(np.complex128) @ _analysis_matrix(N, ks).T  # (..., N)
    basis = np.exp(1j * np.outer(ys, ks))
    basis[:, 0] = np.cos(0.5 * N * ys)  # Nyquist term split evenly
    return (coef @ basis.T).real


def dense_pv_quadrature(f: SampledField, kernel: Callable[[np.ndarray], np.ndarray],
                        axis: int = 0, config: OracleConfig = DEFAULT_CONFIG) -> SampledField:
    """``(1/pi) p.v. int K(t) f(x - t) dt`` along ``axis`` by symmetric node pairs."""
    N = f.grid.points_per_axis
    M = config.oversample * N
    h = 2 * math.pi / M
    t = (np.arange(M // 2) + 0.5) * h
    k_plus = np.asarray(kernel(t), dtype=np.float64)
    k_minus = np.asarray(kernel(-t), dtype=np.float64)
    lines = np.moveaxis(f.values, axis, -1)
    x = _nodes(N)
    # samples at x_j - t_p and x_j + t_p for every node j and pair p
    minus = _line_interpolant(lines, (x[:, None] - t[None, :]).reshape(-1))
    plus = _line_interpolant(lines, (x[:, None] + t[None, :]).reshape(-1))
    shape = lines.shape[:-1] + (N, M // 2)
    minus = minus.reshape(shape)
    plus = plus.reshape(shape)
    out = (h / math.pi) * (minus * k_plus + plus * k_minus).sum(axis=-1)
    return f.with_values(np.moveaxis(out, -1, axis))


def conjugate_kernel(t):
    return 0.5 / np.tan(0.5 * t)


def u_kernel(phi: str, n: int) -> Callable[[np.ndarray], np.ndarray]:
    trig = np.sin if phi == "sine" else np.cos
    return lambda t: trig(n * t) * 0.5 / np.tan(0.5 * t)


def dense_u_type(f: SampledField, phis: Sequence[str], n: int,
                 config: OracleConfig = DEFAULT_CONFIG) -> SampledField:
    out = f
    for axis, phi in enumerate(phis):
        out = dense_pv_quadrature(out, u_kernel(phi, n), axis, config)
    return out


def dense_diagonal(f: SampledField, config: OracleConfig = DEFAULT_CONFIG) -> SampledField:
    """``(1/pi) p.v. int f(x1 - t, x2 - t) / (2 tan(t/2)) dt`` for ``d = 2``, node by node."""
    N = f.grid.points_per_axis
    M = config.oversample * N
    h = 2 * math.pi / M
    t = (np.arange(M // 2) + 0.5) * h
    ks = np.arange(-N // 2, N // 2)
    A = _analysis_matrix(N, ks)
    coef = A @ f.values.astype(np.complex128) @ A.T
    x = _nodes(N)
    out = np.empty(f.grid.shape)
    ker = conjugate_kernel(t)

    def basis(y):
        b = np.exp(1j * np.outer(y, ks))
        b[:, 0] = np.cos(0.5 * N * y)
        return b

    for j1 in range(N):
        b_minus = basis(x[j1] - t)
        b_plus = basis(x[j1] + t)
        for j2 in range(N):
            c_minus = basis(x[j2] - t)
            c_plus = basis(x[j2] + t)
            fm = np.einsum("pa,ab,pb->p", b_minus, coef, c_minus).real
            fp = np.einsum("pa,ab,pb->p", b_plus, coef, c_plus).real
            out[j1, j2] = (h / math.pi) * float(np.sum(ker * (fm - fp)))
    return f.with_values(out)


def kernel_multiplier(kernel: Callable[[np.ndarray], np.ndarray], m: int,
                      points: int = 1 << 16) -> float:
    """``(1/pi) int K(t) cos(m t) dt`` for an even kernel, by dense midpoint pairs."""
    h = 2 * math.pi / points
    t = (np.arange(points // 2) + 0.5) * h
    return float((h / math.pi) * np.sum((kernel(t) + kernel(-t)) * np.cos(m * t)))


def brute_maximal_1d(values: np.ndarray) -> np.ndarray:
    """Every closed arc, summed directly."""
    a = np.abs(np.asarray(values, dtype=np.float64))
    N = a.size
    out = np.zeros(N)
    for s in range(N):
        run = 0.0
        for L in range(1, N + 1):
            run += a[(s + L - 1) % N]
            avg = run / L
            for j in range(s, s + L):
                if avg > out[j % N]:
                    out[j % N] = avg
    return out


def _log_k(u, k):
    a = np.abs(u)
    if k == 0:
        return a
    out = np.zeros_like(a)
    big = a > 1
    out[big] = a[big] * np.log(a[big]) ** k
    return out


def brute_luxemburg(f: SampledField, k: int, grid_points: int = 2001) -> float:
    """Log-spaced scan of ``lam`` to bracket the crossing, then plain bisection."""
    vals = f.flat
    sup = float(np.max(np.abs(vals)))
    if sup == 0.0:
        return 0.0
    cell = f.grid.cell_measure

    def modular(lam):
        return cell * float(np.sum(_log_k(vals / lam, k)))

    lams = sup * np.logspace(-12, 12, grid_points)
    mods = np.array([modular(lam) for lam in lams])
    ok = np.flatnonzero(mods <= 1.0)
    i = int(ok[0])
    if i == 0:
        return float(lams[0])
    lo, hi = float(lams[i - 1]), float(lams[i])
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if modular(mid) > 1.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    return hi


def constant_field_norm_k1(c: float, total_measure: float) -> float:
    """``c / u*`` with ``total_measure * u ln u = 1``, solved by scalar bisection."""
    lo, hi = 1.0, 2.0
    while total_measure * hi * math.log(hi) < 1.0:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if total_measure * mid * math.log(mid) < 1.0:
            lo = mid
        else:
            hi = mid
    return abs(c) / (0.5 * (lo + hi))
