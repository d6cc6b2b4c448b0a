"""Principal-value kernel operators computed by quadrature.

Convolutions use the orientation ``(1/pi) int K(t) f(x - t) dt``, which gives the
classical conjugate pairs ``cos -> sin`` and ``sin -> -cos``.

The p.v. integral is a midpoint rule on ``M = R N`` offset nodes
``t_p = (p + 1/2) 2 pi / M``. Nodes come in exact ``+-t_p`` pairs and ``t = 0``
is never a node, so an odd kernel cancels exactly on constants. Values of
``f`` off the grid come from its band-limited interpolant. For a trigonometric
polynomial the paired integrand is again a trigonometric polynomial, so the
rule is exact once ``M`` exceeds twice its degree.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .spectral import downsample, frequencies, upsample
from .torus import SampledField


@dataclass(frozen=True)
class PvQuadratureScheme:
    refinement: int = 4
    pairing: bool = True

    def __post_init__(self):
        if self.refinement < 2:
            raise ValueError(f"refinement must be >= 2, got {self.refinement}")


DEFAULT_SCHEME = PvQuadratureScheme()

SINE, COSINE = "sine", "cosine"


@dataclass(frozen=True)
class UTypeSpec:
    phis: tuple[str, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "phis", tuple(self.phis))
        for p in self.phis:
            if p not in (SINE, COSINE):
                raise ValueError(f"axis factor must be 'sine' or 'cosine', got {p!r}")
        if self.n < 1:
            raise ValueError(f"modulation degree must be >= 1, got {self.n}")


def _shift_phase(N: int, s: float) -> np.ndarray:
    """Per-axis factor that translates the interpolant by ``s`` (Nyquist split evenly)."""
    k = frequencies(N)
    ph = np.exp(1j * k * s)
    ph[k == -N // 2] = math.cos(0.5 * N * s)
    return ph


def _conj_weights(M: int) -> np.ndarray:
    h = 2 * math.pi / M
    t = (np.arange(M // 2) + 0.5) * h
    return (h / math.pi) * 0.5 / np.tan(0.5 * t)


def _pair(fine: np.ndarray, R: int, w: np.ndarray, odd: bool, pairing: bool) -> np.ndarray:
    if pairing:
        return kernels.pair_sum(fine, R, w, odd)
    # one-sided sums over t < 0 and t > 0, combined at the end
    M = fine.shape[1]
    base = np.arange(M // R)[:, None] * R
    p = np.arange(len(w))[None, :]
    below = fine[:, (base - p - 1) % M] @ w
    above = fine[:, (base + p) % M] @ w
    return below - above if odd else below + above


def _axis_pv(values: np.ndarray, axis: int, scheme: PvQuadratureScheme,
             weights: np.ndarray | None = None, odd: bool = True) -> np.ndarray:
    """Apply the 1-D p.v. rule along ``axis`` of a real array."""
    N = values.shape[axis]
    R = scheme.refinement
    M = R * N
    w = _conj_weights(M) if weights is None else weights
    spec = np.fft.fft(np.moveaxis(values, axis, -1), axis=-1)
    h = 2 * math.pi / M
    # fine[..., j R + l] = f(x_j + (l + 1/2) h)
    shifted = [np.fft.ifft(spec * _shift_phase(N, (l + 0.5) * h), axis=-1).real
               for l in range(R)]
    fine = np.stack(shifted, axis=-1).reshape(spec.shape[:-1] + (M,))
    lead = fine.shape[:-1]
    out = _pair(fine.reshape(-1, M), R, w, odd, scheme.pairing)
    return np.moveaxis(out.reshape(lead + (N,)), -1, axis)


def conjugate_axis(f: SampledField, axis: int, scheme: PvQuadratureScheme = DEFAULT_SCHEME) -> SampledField:
    return f.with_values(_axis_pv(f.values, axis, scheme))


def conjugate_1d(f: SampledField, scheme: PvQuadratureScheme = DEFAULT_SCHEME) -> SampledField:
    """``(1/pi) p.v. int f(x - t) / (2 tan(t/2)) dt`` for a 1-D field."""
    if f.grid.dimension != 1:
        raise ValueError("conjugate_1d needs a 1-D field")
    return conjugate_axis(f, 0, scheme)


def conjugate_dd(f: SampledField, scheme: PvQuadratureScheme = DEFAULT_SCHEME,
                 order: Sequence[int] | None = None) -> SampledField:
    """Iterated 1-D conjugation along every axis, in ``order`` (default 0..d-1)."""
    order = range(f.grid.dimension) if order is None else order
    vals = f.values
    for axis in order:
        vals = _axis_pv(vals, axis, scheme)
    return f.with_values(vals)


def diagonal_pv(f: SampledField, scheme: PvQuadratureScheme = DEFAULT_SCHEME) -> SampledField:
    """``(1/pi) p.v. int f(x1 - t, x2 - t, x3, ...) / (2 tan(t/2)) dt``.

    Each diagonal line ``{(c h + s, s)}`` passes through ``N`` nodes spaced like
    an axis line, so the axis rule applies along it. The fine samples come from
    ``R`` diagonal translates of the interpolant.
    """
    if f.grid.dimension < 2:
        raise ValueError("diagonal conjugate needs d >= 2")
    N = f.grid.points_per_axis
    R = scheme.refinement
    M = R * N
    h = 2 * math.pi / M
    spec = np.fft.fft2(f.values, axes=(0, 1))
    shifted = []
    for l in range(R):
        ph = _shift_phase(N, (l + 0.5) * h)
        mult = ph[:, None] * ph[None, :]
        mult = mult.reshape(mult.shape + (1,) * (f.grid.dimension - 2))
        shifted.append(np.fft.ifft2(spec * mult, axes=(0, 1)).real)
    stack = np.stack(shifted, axis=2)  # (x1, x2, l, rest...)
    c = np.arange(N)[:, None]
    j = np.arange(N)[None, :]
    rows = (c + j) % N
    lines = stack[rows, j]  # (c, j, l, rest...)
    lines = np.moveaxis(lines, (0, 1, 2), (-3, -2, -1))  # (rest..., c, j, l)
    lead = lines.shape[:-3]
    fine = lines.reshape(-1, M)
    out = _pair(fine, R, _conj_weights(M), True, scheme.pairing)
    out = out.reshape(lead + (N, N))  # (rest..., c, j)
    out = np.moveaxis(out, (-2, -1), (0, 1))  # (c, j, rest...)
    result = np.empty_like(f.values)
    result[rows, j] = out
    return f.with_values(result)


def diagonal_conjugate(f: SampledField, scheme: PvQuadratureScheme = DEFAULT_SCHEME) -> SampledField:
    """``p.v. int f(x1 - t, x2 - t, x3, ...) / tan(t/2) dt`` with no ``1/pi`` factor."""
    return diagonal_pv(f, scheme) * (2 * math.pi)


def maximal_along_axis(values: np.ndarray, axis: int) -> np.ndarray:
    """Discrete Hardy-Littlewood maximal function of ``|values|`` along one axis."""
    moved = np.moveaxis(np.abs(np.asarray(values, dtype=np.float64)), axis, -1)
    lead = moved.shape[:-1]
    out = kernels.arc_maximal(np.ascontiguousarray(moved.reshape(-1, moved.shape[-1])))
    return np.moveaxis(out.reshape(lead + (moved.shape[-1],)), -1, axis)


def hl_maximal_1d(f: SampledField) -> SampledField:
    """Largest mean of ``|f|`` over closed grid arcs (1 to N cells) containing each node."""
    if f.grid.dimension != 1:
        raise ValueError("hl_maximal_1d needs a 1-D field")
    return f.with_values(maximal_along_axis(f.values, 0))


def u_type_operator(f: SampledField, spec: UTypeSpec,
                    scheme: PvQuadratureScheme = DEFAULT_SCHEME) -> SampledField:
    """``(1/pi^d) int prod_k phi_k(n t_k) / (2 tan(t_k/2)) f(x - t) dt``.

    Per axis, with ``H`` the conjugate along that axis::

        sine:    sin(nx) H[cos(n.) f] - cos(nx) H[sin(n.) f]
        cosine:  cos(nx) H[cos(n.) f] + sin(nx) H[sin(n.) f]

    Modulation raises the degree by ``n``, so the work happens on the
    twice-refined grid and is sampled back at the end.
    """
    d, N = f.grid.dimension, f.grid.points_per_axis
    if len(spec.phis) != d:
        raise ValueError(f"UTypeSpec has {len(spec.phis)} factors for d={d}")
    if not 1 <= spec.n < N // 2:
        raise ValueError(f"modulation degree must be in [1, {N // 2}), got {spec.n}")
    fine = upsample(f, 2)
    vals = fine.values
    x = fine.grid.axis_nodes()
    n = spec.n
    for axis, phi in enumerate(spec.phis):
        shape = [1] * d
        shape[axis] = x.size
        c = np.cos(n * x).reshape(shape)
        s = np.sin(n * x).reshape(shape)
        hc = _axis_pv(c * vals, axis, scheme)
        hs = _axis_pv(s * vals, axis, scheme)
        vals = s * hc - c * hs if phi == SINE else c * hc + s * hs
    return downsample(fine.with_values(vals), 2)


def g_field(f: SampledField, scheme: PvQuadratureScheme = DEFAULT_SCHEME) -> SampledField:
    """``G = |f~|``, the modulus of the full ``d``-dimensional conjugate."""
    return abs(conjugate_dd(f, scheme))
