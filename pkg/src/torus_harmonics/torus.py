"""Discretized tori, sampled fields, quadrature and node-counting measure.

Every other module computes on a :class:`SampledField`. Values are stored as a
``d``-dimensional array of shape ``(N,) * d`` whose C-order flattening is the
row-major node order with axis order ``(x1, ..., xd)``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class TorusGrid:
    """Uniform grid on the ``d``-torus with ``N`` nodes per axis."""

    dimension: int
    points_per_axis: int

    def __post_init__(self):
        d, n = self.dimension, self.points_per_axis
        if d not in (1, 2, 3):
            raise ValueError(f"dimension must be 1, 2 or 3, got {d}")
        if n < 8 or n & (n - 1):
            raise ValueError(
                f"points_per_axis must be a power of two >= 8 (FFT grid), got {n}")

    @property
    def spacing(self) -> float:
        return TWO_PI / self.points_per_axis

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points_per_axis,) * self.dimension

    @property
    def size(self) -> int:
        return self.points_per_axis ** self.dimension

    @property
    def cell_measure(self) -> float:
        return self.spacing ** self.dimension

    @property
    def total_measure(self) -> float:
        return TWO_PI ** self.dimension

    def axis_nodes(self) -> np.ndarray:
        return np.arange(self.points_per_axis) * self.spacing

    def coordinates(self) -> tuple[np.ndarray, ...]:
        """Broadcastable node coordinates, one array per axis ('ij' indexing)."""
        x = self.axis_nodes()
        return tuple(np.meshgrid(*([x] * self.dimension), indexing="ij"))


def make_grid(d: int, N: int) -> TorusGrid:
    return TorusGrid(d, N)


@dataclass(frozen=True)
class SampledField:
    """A real scalar field on a :class:`TorusGrid`."""

    grid: TorusGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64, order="C")
        if v.size != self.grid.size:
            raise ValueError(
                f"expected {self.grid.size} values, got {v.size}")
        v = v.reshape(self.grid.shape)
        bad = np.flatnonzero(~np.isfinite(v))
        if bad.size:
            raise ValueError(f"non-finite value at node {int(bad[0])}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def flat(self) -> np.ndarray:
        return self.values.reshape(-1)

    def with_values(self, values) -> "SampledField":
        return SampledField(self.grid, values)

    def __add__(self, other):
        if isinstance(other, SampledField):
            _same_grid(self, other)
            return self.with_values(self.values + other.values)
        return self.with_values(self.values + other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, SampledField):
            _same_grid(self, other)
            return self.with_values(self.values - other.values)
        return self.with_values(self.values - other)

    def __mul__(self, alpha):
        if isinstance(alpha, SampledField):
            _same_grid(self, alpha)
            return self.with_values(self.values * alpha.values)
        return self.with_values(self.values * alpha)

    __rmul__ = __mul__

    def __neg__(self):
        return self.with_values(-self.values)

    def __abs__(self):
        return self.with_values(np.abs(self.values))

    def roll(self, shift: Iterable[int]) -> "SampledField":
        """Translate by whole grid cells: ``g(x) = f(x - shift * h)``."""
        shift = tuple(shift)
        return self.with_values(
            np.roll(self.values, shift, axis=tuple(range(len(shift)))))


@dataclass(frozen=True)
class GridMask:
    grid: TorusGrid
    included: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.included, dtype=bool).reshape(self.grid.shape)
        m.setflags(write=False)
        object.__setattr__(self, "included", m)

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.included))

    @property
    def measure(self) -> float:
        return self.grid.cell_measure * self.count

    @property
    def complement_measure(self) -> float:
        return self.grid.cell_measure * (self.grid.size - self.count)

    def __le__(self, other: "GridMask") -> bool:
        return bool(np.all(~self.included | other.included))

    @classmethod
    def full(cls, grid: TorusGrid) -> "GridMask":
        return cls(grid, np.ones(grid.shape, dtype=bool))


def _same_grid(f: SampledField, g: SampledField):
    if f.grid != g.grid:
        raise ValueError(f"grid mismatch: {f.grid} vs {g.grid}")


def sample(grid: TorusGrid, evaluator: Callable[..., object]) -> SampledField:
    """Evaluate ``evaluator(x1, ..., xd)`` at every node.

    The evaluator receives broadcastable coordinate arrays and may return a
    scalar (broadcast to the whole grid) or an array of the grid shape.
    """
    out = np.asarray(evaluator(*grid.coordinates()), dtype=np.float64)
    out = np.broadcast_to(out, grid.shape)
    bad = np.flatnonzero(~np.isfinite(out))
    if bad.size:
        raise ValueError(
            f"evaluator returned non-finite value at node {int(bad[0])}")
    return SampledField(grid, out)


def integrate(f: SampledField | np.ndarray, grid: TorusGrid | None = None) -> float:
    """Rectangle rule ``(2 pi / N)^d * sum(values)``.

    ``np.sum`` over a contiguous float64 buffer uses fixed-order pairwise
    summation, so the result is run-to-run identical.
    """
    if isinstance(f, SampledField):
        values, grid = f.values, f.grid
    else:
        values = np.ascontiguousarray(f, dtype=np.float64)
    return float(grid.cell_measure * np.sum(values.reshape(-1)))


def measure_where(f: SampledField, predicate: Callable[[np.ndarray], np.ndarray]) -> float:
    """Node-counting measure of ``{x : predicate(f(x))}``; predicate is vectorized."""
    hits = np.broadcast_to(np.asarray(predicate(f.values), dtype=bool), f.grid.shape)
    return f.grid.cell_measure * int(np.count_nonzero(hits))


def lp_norm(f: SampledField, p: float = 1.0) -> float:
    if math.isinf(p):
        return float(np.max(np.abs(f.values)))
    return integrate(f.with_values(np.abs(f.values) ** p)) ** (1.0 / p)


def write_field_csv(f: SampledField, path) -> None:
    """Dump ``x1,...,xd,value`` rows in row-major node order at full precision."""
    d = f.grid.dimension
    coords = [c.reshape(-1) for c in f.grid.coordinates()]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"x{i + 1}" for i in range(d)] + ["value"])
        for row in zip(*coords, f.flat):
            w.writerow([f"{v:.17g}" for v in row])


def read_field_csv(path) -> SampledField:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    d = len(header) - 1
    if header != [f"x{i + 1}" for i in range(d)] + ["value"]:
        raise ValueError(f"unexpected field CSV header {header}")
    n = round(len(body) ** (1.0 / d))
    grid = make_grid(d, n)
    values = np.array([float(r[-1]) for r in body])
    return SampledField(grid, values)
