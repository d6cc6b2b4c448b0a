"""Fourier coefficients and truncation operators as exact spectral multipliers.

Every operator here is one forward FFT, a pointwise multiplier and one inverse
FFT. Multipliers are separable, built from one 1-D factor per axis:

* box ``1{|k| <= n}`` for the partial sums ``S_n``;
* ``-i sgn k`` for conjugation (the Nyquist index ``-N/2`` gets 0);
* the modified weight ``w_n(k)`` (1 inside, 1/2 on the edge ``|k| = n``) that is
  the Fourier expansion of ``sin(nt) / (2 tan(t/2))``.
"""
from __future__ import annotations

import csv
import functools
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .torus import TWO_PI, SampledField, TorusGrid, integrate

_IMAG_TOL = 1e-12


@functools.lru_cache(maxsize=None)
def frequencies(N: int) -> np.ndarray:
    """Integer frequencies in FFT order, ``[0, 1, ..., N/2-1, -N/2, ..., -1]``."""
    k = np.fft.fftfreq(N, 1.0 / N).round().astype(np.int64)
    k.setflags(write=False)
    return k


def box_factor(N: int, n: int) -> np.ndarray:
    return (np.abs(frequencies(N)) <= n).astype(np.float64)


def modified_factor(N: int, n: int) -> np.ndarray:
    k = np.abs(frequencies(N))
    return np.where(k < n, 1.0, np.where(k == n, 0.5, 0.0))


def conjugate_factor(N: int) -> np.ndarray:
    k = frequencies(N)
    out = -1j * np.sign(k).astype(np.complex128)
    out[k == -N // 2] = 0.0
    return out


def separable(factors: Sequence[np.ndarray]) -> np.ndarray:
    """Outer product of per-axis 1-D factors into a ``d``-dimensional multiplier."""
    d = len(factors)
    out = np.ones((1,) * d, dtype=np.result_type(*factors))
    for axis, fac in enumerate(factors):
        shape = [1] * d
        shape[axis] = fac.size
        out = out * fac.reshape(shape)
    return out


@dataclass(frozen=True)
class FrequencyWindow:
    kind: str
    bounds: tuple[int, ...]

    @classmethod
    def square(cls, n: int, d: int) -> "FrequencyWindow":
        return cls("square", (int(n),) * d)

    @classmethod
    def rectangular(cls, n: Sequence[int]) -> "FrequencyWindow":
        return cls("rectangular", tuple(int(v) for v in n))

    def check(self, grid: TorusGrid) -> None:
        if len(self.bounds) != grid.dimension:
            raise ValueError(
                f"window has {len(self.bounds)} bounds for a {grid.dimension}-d grid")
        half = grid.points_per_axis // 2
        for b in self.bounds:
            if not 0 <= b < half:
                raise ValueError(
                    f"window bound {b} outside [0, {half}) for N={grid.points_per_axis}")

    @property
    def min(self) -> int:
        return min(self.bounds)


@dataclass(frozen=True)
class SpectralCoefficients:
    """Coefficients ``a_k`` on the centered window ``k in [-N/2, N/2)^d``.

    ``coeffs[k + N/2]`` holds ``a_k`` along every axis.
    """

    grid: TorusGrid
    coeffs: np.ndarray = field(repr=False)

    def __getitem__(self, k) -> complex:
        if np.isscalar(k):
            k = (k,)
        half = self.grid.points_per_axis // 2
        return complex(self.coeffs[tuple(int(v) + half for v in k)])

    def lattice(self) -> np.ndarray:
        """Centered lattice indices, one array per axis, matching ``coeffs``."""
        N = self.grid.points_per_axis
        k = np.arange(-N // 2, N // 2)
        return np.stack(np.meshgrid(*([k] * self.grid.dimension), indexing="ij"))


def _spectrum(f: SampledField) -> np.ndarray:
    return np.fft.fftn(f.values) / f.grid.size


def _synthesize(grid: TorusGrid, spec: np.ndarray, scale: float = 1.0) -> np.ndarray:
    out = np.fft.ifftn(spec) * grid.size
    resid = float(np.max(np.abs(out.imag))) if out.size else 0.0
    if resid > _IMAG_TOL * max(1.0, scale):
        raise ArithmeticError(
            f"imaginary residue {resid:.3e} in a real-valued synthesis")
    return np.ascontiguousarray(out.real)


def apply_multiplier(f: SampledField, multiplier: np.ndarray) -> SampledField:
    spec = _spectrum(f)
    scale = float(np.sum(np.abs(spec)))
    return SampledField(f.grid, _synthesize(f.grid, spec * multiplier, scale))


def coefficients(f: SampledField) -> SpectralCoefficients:
    spec = _spectrum(f)
    return SpectralCoefficients(f.grid, np.fft.fftshift(spec))


def _check_window(f: SampledField, n: Sequence[int]) -> None:
    FrequencyWindow("rectangular", tuple(n)).check(f.grid)


def rectangular_partial_sum(f: SampledField, n: Sequence[int] | FrequencyWindow) -> SampledField:
    bounds = n.bounds if isinstance(n, FrequencyWindow) else tuple(n)
    _check_window(f, bounds)
    N = f.grid.points_per_axis
    return apply_multiplier(f, separable([box_factor(N, b) for b in bounds]))


def square_partial_sum(f: SampledField, n: int) -> SampledField:
    return rectangular_partial_sum(f, (n,) * f.grid.dimension)


def conjugate_rectangular_partial_sum(f: SampledField, n: Sequence[int]) -> SampledField:
    bounds = tuple(n)
    _check_window(f, bounds)
    N = f.grid.points_per_axis
    return apply_multiplier(
        f, separable([box_factor(N, b) * conjugate_factor(N) for b in bounds]))


def conjugate_square_partial_sum(f: SampledField, n: int) -> SampledField:
    return conjugate_rectangular_partial_sum(f, (n,) * f.grid.dimension)


def modified_square_partial_sum(f: SampledField, n: int, conjugate: bool = False) -> SampledField:
    """``S*_n`` (or ``S~*_n`` when ``conjugate``) as a spectral multiplier."""
    N = f.grid.points_per_axis
    if not 1 <= n < N // 2:
        raise ValueError(f"modified sums need 1 <= n < {N // 2}, got {n}")
    fac = modified_factor(N, n)
    if conjugate:
        fac = fac * conjugate_factor(N)
    return apply_multiplier(f, separable([fac] * f.grid.dimension))


def spectral_conjugate(f: SampledField) -> SampledField:
    """Full ``d``-dimensional conjugate, multiplier ``prod_i(-i sgn k_i)``."""
    N = f.grid.points_per_axis
    return apply_multiplier(f, separable([conjugate_factor(N)] * f.grid.dimension))


def square_sum_stack(f: SampledField, ns: Sequence[int]) -> Iterator[tuple[int, np.ndarray, np.ndarray]]:
    """Yield ``(n, S_n f, S~_n f)`` value arrays, reusing one forward transform."""
    N, d = f.grid.points_per_axis, f.grid.dimension
    spec = _spectrum(f)
    scale = float(np.sum(np.abs(spec)))
    conj = conjugate_factor(N)
    for n in ns:
        if not 0 <= n < N // 2:
            raise ValueError(f"n={n} outside [0, {N // 2}) for N={N}")
        box = box_factor(N, n)
        plain = _synthesize(f.grid, spec * separable([box] * d), scale)
        tilde = _synthesize(f.grid, spec * separable([box * conj] * d), scale)
        yield n, plain, tilde


def modified_gap_stack(f: SampledField, ns: Sequence[int]) -> Iterator[tuple[int, np.ndarray, np.ndarray]]:
    """Yield ``(n, S_n f - S*_n f, S~_n f - S~*_n f)`` value arrays."""
    N, d = f.grid.points_per_axis, f.grid.dimension
    spec = _spectrum(f)
    scale = float(np.sum(np.abs(spec)))
    conj = separable([conjugate_factor(N)] * d)
    for n in ns:
        if not 1 <= n < N // 2:
            raise ValueError(f"n={n} outside [1, {N // 2}) for N={N}")
        diff = separable([box_factor(N, n)] * d) - separable([modified_factor(N, n)] * d)
        yield (n, _synthesize(f.grid, spec * diff, scale),
               _synthesize(f.grid, spec * diff * conj, scale))


def upsample(f: SampledField, factor: int) -> SampledField:
    """Band-limited interpolant of ``f`` on the ``factor``-times finer grid.

    A Nyquist coefficient is split evenly between ``-N/2`` and ``+N/2`` so the
    interpolant stays real.
    """
    if factor == 1:
        return f
    N = f.grid.points_per_axis
    M = N * factor
    vals = f.values.astype(np.complex128)
    for axis in range(f.grid.dimension):
        X = np.fft.fft(vals, axis=axis)
        X = np.moveaxis(X, axis, -1)
        Y = np.zeros(X.shape[:-1] + (M,), dtype=np.complex128)
        Y[..., : N // 2] = X[..., : N // 2]
        Y[..., M - N // 2 + 1:] = X[..., N // 2 + 1:]
        Y[..., M - N // 2] = 0.5 * X[..., N // 2]
        Y[..., N // 2] = 0.5 * X[..., N // 2]
        vals = np.moveaxis(np.fft.ifft(Y, axis=-1) * factor, -1, axis)
    grid = TorusGrid(f.grid.dimension, M)
    return SampledField(grid, vals.real)


def downsample(f: SampledField, factor: int) -> SampledField:
    if factor == 1:
        return f
    sl = (slice(None, None, factor),) * f.grid.dimension
    grid = TorusGrid(f.grid.dimension, f.grid.points_per_axis // factor)
    return SampledField(grid, f.values[sl])


def dirichlet_kernel(n: int, t):
    """``D_n(t) = sin((n + 1/2) t) / (2 sin(t/2))``, equal to ``n + 1/2`` on ``2 pi Z``.

    ``t`` is first reduced into ``[-pi, pi]`` exactly (``fmod`` and a Sterbenz
    subtraction), which keeps the rounding of ``(n + 1/2) t`` from being
    amplified by the small denominator near the poles.
    """
    t = np.asarray(t, dtype=np.float64)
    r = np.fmod(t, TWO_PI)
    r = np.where(r > math.pi, r - TWO_PI, np.where(r < -math.pi, r + TWO_PI, r))
    at_pole = r == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.sin((n + 0.5) * r) / (2.0 * np.sin(0.5 * r))
    out = np.where(at_pole, n + 0.5, val)
    return float(out) if out.ndim == 0 else out


def check_hermitian(c: SpectralCoefficients, rtol: float = 1e-12) -> float:
    """Largest relative violation of ``a_{-k} = conj(a_k)`` over the window."""
    a = c.coeffs
    # index j <-> k = j - N/2, so -k <-> N - j; the row j = 0 (k = -N/2) has no partner
    inner = (slice(1, None),) * a.ndim
    sub = a[inner]
    flipped = sub[(slice(None, None, -1),) * a.ndim]
    scale = max(float(np.max(np.abs(a))), 1e-300)
    return float(np.max(np.abs(sub - np.conj(flipped)))) / scale


def check_mean(f: SampledField, c: SpectralCoefficients) -> float:
    a0 = c[(0,) * f.grid.dimension]
    ref = integrate(f) / f.grid.total_measure
    return abs(a0 - ref) / max(abs(ref), 1.0)


def write_coefficients_csv(c: SpectralCoefficients, path) -> None:
    d = c.grid.dimension
    lat = c.lattice().reshape(d, -1)
    vals = c.coeffs.reshape(-1)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"k{i + 1}" for i in range(d)] + ["re", "im"])
        for j in range(vals.size):
            w.writerow([str(int(v)) for v in lat[:, j]]
                       + [f"{vals[j].real:.17g}", f"{vals[j].imag:.17g}"])
