"""The positive majorant ``F`` controlling square partial sums in exponential integrals.

In one dimension ``F = Mf``. In two dimensions ``F`` is assembled from the
diagonal conjugate ``g`` of ``f``::

    F1   maximal function of g along x1, one slice per x2
    F2   maximal function of g along x2, one slice per x1
    F3   (1/2pi) int |g(t, x2 + pi)| dt  +  sup_{n <= n_max} of the gaps
         |S_n f - S*_n f| + |S~_n f - S~*_n f|  +  mean |f|
    G    |f~|, the modulus of the full conjugate
    F  = 4 (F1 + F2 + F3 + G) + floor

The zero frequency is invisible to ``g``, ``G`` and the gaps, so ``F3`` also
carries the constant ``(2pi)^-d ||f||_1``, the bound on the frequency-free term
of the gap decomposition. Without it ``F`` would collapse to the floor on
constants. The ``floor`` keeps ``F`` strictly positive where every part vanishes.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from ._parallel import pmap
from .singular import DEFAULT_SCHEME, PvQuadratureScheme, conjugate_dd, diagonal_pv, maximal_along_axis
from .spectral import modified_gap_stack
from .torus import GridMask, SampledField, integrate, lp_norm, write_field_csv

PART_NAMES = ("F1", "F2", "F3", "G")
FLOOR_SCALE = 1e-8


@dataclass(frozen=True)
class MajorantField:
    field: SampledField
    parts: dict = field(repr=False)
    floor: float
    scale: float = 4.0
    components: dict = field(default_factory=dict, repr=False)

    @property
    def values(self) -> np.ndarray:
        return self.field.values

    @property
    def grid(self):
        return self.field.grid

    def masses(self) -> dict:
        return {name: integrate(self.parts[name]) for name in PART_NAMES}


@dataclass(frozen=True)
class GFunctionField:
    field: SampledField


def majorant_floor(f: SampledField) -> float:
    return FLOOR_SCALE * (1.0 + lp_norm(f, 1))


def _assemble(parts: dict, floor: float, scale: float, components=None) -> MajorantField:
    total = sum(parts[name].values for name in PART_NAMES)
    field_ = parts["F1"].with_values(scale * total + floor)
    return MajorantField(field_, parts, floor, scale, components or {})


def majorant_1d(f: SampledField) -> MajorantField:
    """Base case ``F = Mf + floor``."""
    if f.grid.dimension != 1:
        raise ValueError("majorant_1d needs a 1-D field")
    zero = f.with_values(np.zeros(f.grid.shape))
    mf = f.with_values(maximal_along_axis(f.values, 0))
    parts = {"F1": mf, "F2": zero, "F3": zero, "G": zero}
    return _assemble(parts, majorant_floor(f), 1.0)


def g_of(f: SampledField, scheme: PvQuadratureScheme = DEFAULT_SCHEME) -> GFunctionField:
    """``g(x1, x2) = (1/pi) p.v. int f(x1 - t, x2 - t) / (2 tan(t/2)) dt``."""
    if f.grid.dimension != 2:
        raise ValueError("g_of needs a 2-D field")
    return GFunctionField(diagonal_pv(f, scheme))


def lemma2_envelope(f: SampledField, n_max: int) -> SampledField:
    """Pointwise ``max_{1<=n<=n_max} |S_n f - S*_n f| + |S~_n f - S~*_n f|``."""
    N = f.grid.points_per_axis
    if not 1 <= n_max < N // 2:
        raise ValueError(f"n_max must be in [1, {N // 2}), got {n_max}")

    def one(n):
        (_, plain, conj), = modified_gap_stack(f, [n])
        return np.abs(plain) + np.abs(conj)

    env = np.zeros(f.grid.shape)
    for layer in pmap(one, range(1, n_max + 1)):
        np.maximum(env, layer, out=env)
    return f.with_values(env)


def majorant_2d(f: SampledField, n_max: int,
                scheme: PvQuadratureScheme = DEFAULT_SCHEME) -> MajorantField:
    d = f.grid.dimension
    if d == 3:
        raise ValueError("majorant construction is implemented for d <= 2 only")
    if d != 2:
        raise ValueError("majorant_2d needs a 2-D field")
    N = f.grid.points_per_axis
    if not 1 <= n_max < N // 2:
        raise ValueError(f"n_max must be in [1, {N // 2}), got {n_max}")
    g = g_of(f, scheme).field.values
    f1 = maximal_along_axis(g, 0)
    f2 = maximal_along_axis(g, 1)
    col_mean = np.mean(np.abs(g), axis=0)  # (1/2pi) int |g(t, x2)| dt per x2
    f3a = np.broadcast_to(np.roll(col_mean, -(N // 2))[None, :], g.shape)
    f3b = lemma2_envelope(f, n_max).values
    f3c = np.full(g.shape, lp_norm(f, 1) / f.grid.total_measure)
    G = np.abs(conjugate_dd(f, scheme).values)
    parts = {
        "F1": f.with_values(f1),
        "F2": f.with_values(f2),
        "F3": f.with_values(f3a + f3b + f3c),
        "G": f.with_values(G),
    }
    comps = {"F3a": f.with_values(f3a), "F3b": f.with_values(f3b),
             "F3c": f.with_values(f3c)}
    return _assemble(parts, majorant_floor(f), 4.0, comps)


def majorant(f: SampledField, n_max: int | None = None,
             scheme: PvQuadratureScheme = DEFAULT_SCHEME) -> MajorantField:
    if f.grid.dimension == 1:
        return majorant_1d(f)
    if n_max is None:
        raise ValueError("n_max is required for d >= 2")
    return majorant_2d(f, n_max, scheme)


def exceptional_set(F: MajorantField | SampledField, eps: float) -> GridMask:
    """``{F <= tau}`` with ``tau`` the node quantile that leaves out at most ``eps``."""
    fld = F.field if isinstance(F, MajorantField) else F
    grid = fld.grid
    if not 0.0 < eps < grid.total_measure:
        raise ValueError(f"eps must be in (0, {grid.total_measure}), got {eps}")
    allowed = int(math.floor(eps / grid.cell_measure))
    vals = np.sort(fld.flat)
    tau = vals[grid.size - 1 - allowed]
    return GridMask(grid, fld.values <= tau)


def exceptional_threshold(F: MajorantField | SampledField, mask: GridMask) -> float:
    fld = F.field if isinstance(F, MajorantField) else F
    return float(np.max(fld.values[mask.included]))


def write_majorant(F: MajorantField, csv_path, json_path) -> None:
    write_field_csv(F.field, csv_path)
    meta = {"floor": F.floor, "scale": F.scale, "l1_mass": F.masses()}
    with open(json_path, "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
