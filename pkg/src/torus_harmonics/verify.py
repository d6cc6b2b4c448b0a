"""Sweeps over ``n`` that check the exponential, measure and gap estimates.

A finite sweep cannot certify a supremum over all ``n``. "Bounded in ``n``"
is read as a non-positive least-squares slope over the last half of the sweep
together with a small change when the sweep range doubles.
"""
from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ._parallel import pmap
from .majorant import MajorantField, exceptional_set, exceptional_threshold
from .orlicz import luxemburg_norm
from .spectral import (conjugate_rectangular_partial_sum, modified_gap_stack,
                       rectangular_partial_sum, spectral_conjugate, square_sum_stack)
from .torus import GridMask, SampledField, integrate

LOG_DOMAIN_THRESHOLD = 700.0
C1_CAP = 100.0
SLOPE_ZERO_RTOL = 1e-12


@dataclass
class VerificationReport:
    experiment: str
    params: dict = field(default_factory=dict)
    per_n: list = field(default_factory=list)
    sup_metric: float = 0.0
    trend_slope: float = 0.0
    calibration: dict | None = None
    saturated: bool = False
    extra: dict = field(default_factory=dict)

    @classmethod
    def build(cls, experiment, params, per_n, **kw) -> "VerificationReport":
        per_n = sorted(((int(n), float(v)) for n, v in per_n), key=lambda p: p[0])
        sup = max((v for _, v in per_n), default=0.0)
        return cls(experiment, dict(params), per_n, sup, trend_slope(per_n), **kw)

    @property
    def values(self) -> list:
        return [v for _, v in self.per_n]

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "params": self.params,
            "per_n": [[n, v] for n, v in self.per_n],
            "sup_metric": self.sup_metric,
            "trend_slope": self.trend_slope,
            "calibration": self.calibration,
            "saturated": self.saturated,
            "extra": self.extra,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        return cls(d["experiment"], d.get("params", {}),
                   [(int(n), float(v)) for n, v in d["per_n"]],
                   d["sup_metric"], d["trend_slope"], d.get("calibration"),
                   d.get("saturated", False), d.get("extra", {}))


def trend_slope(per_n: Sequence[tuple[int, float]]) -> float:
    """Least-squares slope of metric against ``n`` over the last half of the sweep.

    Slopes below ``1e-12`` times the largest magnitude in the window are
    rounding noise on a saturated sweep and are reported as 0.
    """
    tail = list(per_n)[len(per_n) // 2:]
    if len(tail) < 2:
        return 0.0
    x = np.array([p[0] for p in tail], dtype=np.float64)
    y = np.array([p[1] for p in tail], dtype=np.float64)
    if not np.all(np.isfinite(y)):
        return math.inf
    xc = x - x.mean()
    slope = float(np.dot(xc, y - y.mean()) / np.dot(xc, xc))
    if abs(slope) <= SLOPE_ZERO_RTOL * max(1.0, float(np.max(np.abs(y)))):
        return 0.0
    return slope


def report_csv(report: VerificationReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "metric"])
    for n, v in report.per_n:
        w.writerow([n, repr(float(v))])
    return buf.getvalue()


def parse_report_csv(text: str) -> list:
    rows = list(csv.reader(io.StringIO(text)))
    return [(int(r[0]), float(r[1])) for r in rows[1:]]


# exponential integrals -------------------------------------------------------

def _exp_mean(exponent: np.ndarray, cell: float, mask: np.ndarray | None) -> tuple[float, bool]:
    e = exponent if mask is None else exponent[mask]
    if e.size == 0:
        return 0.0, False
    top = float(np.max(e))
    if top < LOG_DOMAIN_THRESHOLD:
        return cell * float(np.sum(np.exp(e))), False
    log_total = math.log(cell) + top + math.log(float(np.sum(np.exp(e - top))))
    try:
        return math.exp(log_total), True
    except OverflowError:
        return math.inf, True


def _majorant_values(F) -> np.ndarray:
    return F.values if isinstance(F, (MajorantField, SampledField)) else np.asarray(F)


def ratio_stack(f: SampledField, F, ns: Sequence[int]) -> np.ndarray:
    """``(|S_n f| + |S~_n f|) / F`` for each ``n``, shape ``(len(ns),) + grid.shape``."""
    Fv = _majorant_values(F)
    if np.any(Fv <= 0):
        raise ValueError("majorant must be strictly positive")

    def one(n):
        (_, plain, tilde), = square_sum_stack(f, [n])
        return (np.abs(plain) + np.abs(tilde)) / Fv

    return np.stack(pmap(one, list(ns))) if len(ns) else np.zeros((0,) + f.grid.shape)


def exp_integral(f: SampledField, n: int, F, c: float,
                 mask: GridMask | None = None) -> float:
    """``int exp(c (|S_n f| + |S~_n f|) / F)``, optionally restricted to ``mask``."""
    if c <= 0:
        raise ValueError(f"c must be positive, got {c}")
    r = ratio_stack(f, F, [n])[0]
    value, _ = _exp_mean(c * r, f.grid.cell_measure,
                         None if mask is None else mask.included)
    return value


def sweep_exp_bound(f: SampledField, F, n_range: Sequence[int], c: float,
                    mask: GridMask | None = None, experiment: str = "exp_bound",
                    params: dict | None = None) -> VerificationReport:
    if c <= 0:
        raise ValueError(f"c must be positive, got {c}")
    ns = list(n_range)
    ratios = ratio_stack(f, F, ns)
    m = None if mask is None else mask.included
    per_n, saturated = [], False
    for n, r in zip(ns, ratios):
        v, sat = _exp_mean(c * r, f.grid.cell_measure, m)
        per_n.append((n, v))
        saturated |= sat
    p = {"c": c, "n_min": min(ns), "n_max": max(ns)}
    p.update(params or {})
    return VerificationReport.build(experiment, p, per_n, saturated=saturated)


def calibrate_c1(f: SampledField, F, n_range: Sequence[int], c2_budget: float,
                 tol: float = 1e-3) -> float:
    """Largest ``c`` (to ``tol``) with ``sup_n int exp(c R_n) <= c2_budget``.

    Capped at ``C1_CAP``. Returns 0 with a warning when even ``c = tol`` fails.
    """
    total = f.grid.total_measure
    if c2_budget <= total:
        raise ValueError(f"budget must exceed the torus measure {total}")
    ratios = ratio_stack(f, F, list(n_range))
    cell = f.grid.cell_measure

    def ok(c):
        return all(_exp_mean(c * r, cell, None)[0] <= c2_budget for r in ratios)

    if ok(C1_CAP):
        return C1_CAP
    if not ok(tol):
        warnings.warn("calibration failed: even the smallest c exceeds the budget")
        return 0.0
    lo, hi = tol, C1_CAP
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


# convergence checks ----------------------------------------------------------

def _partial(f: SampledField, n) -> SampledField:
    bounds = (int(n),) * f.grid.dimension if np.isscalar(n) else tuple(int(v) for v in n)
    return rectangular_partial_sum(f, bounds)


def convergence_in_measure(f: SampledField, n, eps: float) -> float:
    """``|{|S_n f - f| > eps}|``; ``n`` may be a scalar or a rectangular vector."""
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    diff = np.abs(_partial(f, n).values - f.values)
    return f.grid.cell_measure * int(np.count_nonzero(diff > eps))


@dataclass(frozen=True)
class PhiModulus:
    evaluator: Callable[[np.ndarray], np.ndarray]

    def __call__(self, t):
        out = np.asarray(self.evaluator(np.asarray(t, dtype=np.float64)), dtype=np.float64)
        if np.any(out < 0):
            raise ValueError("Phi must be non-negative")
        return out


def phi_modulus_decay(f: SampledField, E: GridMask, phi: PhiModulus,
                      n_range: Sequence[int]) -> VerificationReport:
    ns = list(n_range)

    def one(n):
        err = np.abs(_partial(f, n).values - f.values)
        vals = np.broadcast_to(phi(err), f.grid.shape)
        return f.grid.cell_measure * float(np.sum(vals[E.included]))

    per_n = list(zip(ns, pmap(one, ns)))
    return VerificationReport.build(
        "phi_modulus", {"n_min": min(ns), "n_max": max(ns), "measure_E": E.measure}, per_n)


def lemma2_gap(f: SampledField, n_max: int) -> tuple[float, float]:
    """``int max_{n<=n_max} |S_n f - S*_n f|`` and the conjugate analogue."""
    N = f.grid.points_per_axis
    if not 1 <= n_max < N // 2:
        raise ValueError(f"n_max must be in [1, {N // 2}), got {n_max}")
    env_plain = np.zeros(f.grid.shape)
    env_conj = np.zeros(f.grid.shape)
    for _, plain, conj in modified_gap_stack(f, range(1, n_max + 1)):
        np.maximum(env_plain, np.abs(plain), out=env_plain)
        np.maximum(env_conj, np.abs(conj), out=env_conj)
    return (integrate(f.with_values(env_plain)), integrate(f.with_values(env_conj)))


def exp_mean_convergence(f: SampledField, E: GridMask, A: float,
                         n_range: Sequence[int]) -> VerificationReport:
    """``int_E (exp(A |S_n f - f|) - 1)`` and the same for ``S~_n f`` against ``f~``."""
    if A <= 0:
        raise ValueError(f"A must be positive, got {A}")
    ns = list(n_range)
    ref = spectral_conjugate(f).values
    cell = f.grid.cell_measure
    m = E.included

    def one(n):
        (_, plain, tilde), = square_sum_stack(f, [n])
        a = cell * float(np.sum(np.expm1(A * np.abs(plain - f.values))[m]))
        b = cell * float(np.sum(np.expm1(A * np.abs(tilde - ref))[m]))
        return a, b

    vals = pmap(one, ns)
    per_n = [(n, a) for n, (a, _) in zip(ns, vals)]
    conj = [[n, b] for n, (_, b) in zip(ns, vals)]
    rep = VerificationReport.build(
        "exp_mean_convergence", {"A": A, "n_min": min(ns), "n_max": max(ns),
                                 "measure_E": E.measure}, per_n)
    rep.extra["conjugate"] = conj
    rep.extra["conjugate_sup"] = max(b for _, b in conj)
    rep.extra["conjugate_trend_slope"] = trend_slope(conj)
    return rep


def log_growth_check(f: SampledField, E: GridMask, subsequence: Sequence[int],
                     k_start: int = 2, clamp: bool = False) -> VerificationReport:
    """``max_E (|S_{n_k} f| + |S~_{n_k} f|) / log k`` for ``k = k_start, ...``.

    With ``clamp`` an ``n_k`` beyond the grid window is replaced by ``N/2 - 1``,
    where the partial sums have already saturated.
    """
    if k_start < 2:
        raise ValueError("k must start at 2 so that log k > 0")
    seq = [int(v) for v in subsequence]
    if any(b <= a for a, b in zip(seq, seq[1:])):
        raise ValueError("subsequence must be increasing")
    top = f.grid.points_per_axis // 2 - 1
    if clamp:
        used = [min(n, top) for n in seq]
    else:
        if seq and seq[-1] > top:
            raise ValueError(f"n_k={seq[-1]} outside the window [0, {top}]")
        used = seq
    ks = list(range(k_start, k_start + len(seq)))

    def one(n):
        (_, plain, tilde), = square_sum_stack(f, [n])
        s = np.abs(plain) + np.abs(tilde)
        return float(np.max(s[E.included])) if E.count else 0.0

    peaks = pmap(one, used)
    per_k = [(k, p / math.log(k)) for k, p in zip(ks, peaks)]
    rep = VerificationReport.build(
        "log_growth", {"subsequence": seq, "used": used, "k_start": k_start,
                       "clamped": used != seq}, per_k)
    return rep


# weak type and corollary helpers ---------------------------------------------

def weak_type_table(values: np.ndarray, cell: float, lambdas: Sequence[float]) -> list:
    """``[lam, lam * |{values > lam}|]`` rows."""
    v = np.asarray(values).reshape(-1)
    return [[float(lam), float(lam) * cell * int(np.count_nonzero(v > lam))] for lam in lambdas]


def weak_type_constant(values: np.ndarray, cell: float, lambdas: Sequence[float],
                       norm: float) -> float:
    if norm <= 0:
        return 0.0
    return max(row[1] for row in weak_type_table(values, cell, lambdas)) / norm


DYADIC_LAMBDAS = tuple(2.0 ** j for j in range(13))


def exceptional_exp_sweep(f: SampledField, F: MajorantField, eps: float,
                          n_range: Sequence[int]) -> VerificationReport:
    """Exponential sweep restricted to the exceptional-set complement.

    On ``E = {F <= tau}`` the exponent ``(|S_n f| + |S~_n f|) / tau`` is at most
    the one with ``F`` in the denominator. ``tau`` plays the role of
    ``||f|| / (gamma eps)``, and the implied ``gamma`` is reported as an
    empirical stand-in.
    """
    E = exceptional_set(F, eps)
    tau = exceptional_threshold(F, E)
    k = max(f.grid.dimension - 1, 0)
    norm = luxemburg_norm(f, k).value
    rep = sweep_exp_bound(f, np.full(f.grid.shape, tau), n_range, 1.0, mask=E,
                          experiment="corollary1",
                          params={"eps": eps, "tau": tau})
    rep.calibration = {
        "gamma_empirical": (norm / (eps * tau)) if norm > 0 else None,
        "complement_measure": E.complement_measure,
        "luxemburg_norm": norm,
        "label": "empirical stand-in; gamma is not fixed by the theory",
    }
    return rep
