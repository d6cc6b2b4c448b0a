"""``Log_k`` Young functions, Orlicz integrals and the Luxemburg norm.

``Log_k(u) = |u| (log+ |u|)^k`` with the natural logarithm, and ``Log_0(u) = |u|``
so that ``Log_0(L)`` is ``L^1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .torus import SampledField, integrate

MAX_K = 4
_BISECT_RTOL = 1e-10
_BISECT_MAX_ITER = 200


@dataclass(frozen=True)
class OrliczIndex:
    k: int

    def __post_init__(self):
        if not 0 <= self.k <= MAX_K:
            raise ValueError(f"Orlicz index must be in [0, {MAX_K}], got {self.k}")


@dataclass(frozen=True)
class LuxemburgNormResult:
    value: float
    residual: float

    def __float__(self):
        return self.value


def _index(k) -> int:
    return k.k if isinstance(k, OrliczIndex) else OrliczIndex(int(k)).k


def log_k_value(u, k):
    k = _index(k)
    a = np.abs(np.asarray(u, dtype=np.float64))
    if k == 0:
        out = a
    else:
        with np.errstate(divide="ignore"):
            lg = np.where(a > 1.0, np.log(np.where(a > 1.0, a, 1.0)), 0.0)
        out = a * lg ** k
    return float(out) if out.ndim == 0 else out


def orlicz_integral(f: SampledField, k) -> float:
    return integrate(f.with_values(log_k_value(f.values, k)))


def _modular(values: np.ndarray, lam: float, k: int, cell: float) -> float:
    return cell * float(np.sum(log_k_value(values / lam, k)))


def luxemburg_norm(f: SampledField, k) -> LuxemburgNormResult:
    """``inf{lam > 0 : int Log_k(f / lam) <= 1}`` by bisection in ``log lam``.

    ``lam -> int Log_k(f/lam)`` is continuous and non-increasing, strictly
    decreasing where positive, so the infimum is the root of ``modular = 1``.
    """
    k = _index(k)
    vals = f.flat
    sup = float(np.max(np.abs(vals))) if vals.size else 0.0
    if sup == 0.0:
        return LuxemburgNormResult(0.0, 0.0)
    cell = f.grid.cell_measure
    if k == 0:
        # closed form: the modular is linear in 1/lam
        value = integrate(f.with_values(np.abs(f.values)))
        return LuxemburgNormResult(value, 0.0)

    def phi(log_lam):
        return _modular(vals, math.exp(log_lam), k, cell) - 1.0

    # at lam = sup|f| every |f/lam| <= 1 so the modular vanishes
    hi = math.log(sup)
    B = 1.0
    while phi(hi - B) <= 0.0:
        B *= 2.0
        if B > 1e4:
            raise ArithmeticError("could not bracket the Luxemburg norm")
    lo = hi - B
    for _ in range(_BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if phi(mid) > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= _BISECT_RTOL * 0.1:
            break
    value = math.exp(hi)
    return LuxemburgNormResult(value, abs(phi(hi)))
