"""Closed-form test functions addressed by id strings such as ``logsing:16``.

Truncated series have a fixed degree independent of the grid, so the same
function can be sampled on grids of different resolution.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .torus import SampledField, TorusGrid, sample


@dataclass(frozen=True)
class FunctionCatalogEntry:
    id: str
    build: Callable[..., Callable]
    defaults: tuple = ()
    metadata: dict = field(default_factory=dict)

    def degree(self, *params) -> int:
        return self.metadata["degree"](*params)


def _prod(fn):
    def ev(*xs):
        out = 1.0
        for x in xs:
            out = out * fn(x)
        return out
    return ev


def _const(c=1.0):
    return lambda *xs: float(c)


def _cos(m=1):
    return _prod(lambda x: np.cos(m * x))


def _sin(m=1):
    return _prod(lambda x: np.sin(m * x))


def _cos_sum():
    return lambda *xs: np.cos(sum(xs))


def _trig_mix():
    def ev(*xs):
        out = 0.5
        for i, x in enumerate(xs):
            out = out + np.cos((i + 2) * x)
        return out + 2.0 * _prod(np.sin)(*xs) + _prod(lambda x: np.cos(3 * x))(*xs)
    return ev


def _series(coef: Callable[[int], float], trig, K: int, step: int = 1):
    ks = list(range(1, int(K) + 1, step))

    def one(x):
        out = np.zeros_like(np.asarray(x, dtype=np.float64))
        for k in ks:
            out = out + coef(k) * trig(k * x)
        return out
    return _prod(one)


def _square(K=15):
    return _series(lambda k: 4.0 / (math.pi * k), np.sin, K, step=2)


def _sawtooth(K=16):
    return _series(lambda k: 1.0 / k, np.sin, K)


def _logsing(K=16):
    # truncation of log(1 / |2 sin(x/2)|) = sum cos(kx)/k
    return _series(lambda k: 1.0 / k, np.cos, K)


def _random(deg=6, seed=0):
    deg, seed = int(deg), int(seed)
    rng = np.random.default_rng(seed)
    terms = rng.standard_normal((64, 2))
    ks = rng.integers(-deg, deg + 1, size=(64, 3))

    def ev(*xs):
        out = 0.0
        for (amp, phase), k in zip(terms, ks):
            arg = sum(int(k[i]) * xs[i] for i in range(len(xs)))
            out = out + amp * np.cos(arg + phase)
        return out
    return ev


CATALOG: dict[str, FunctionCatalogEntry] = {
    e.id: e for e in [
        FunctionCatalogEntry("const", _const, (1.0,),
                             {"band_limited": True, "degree": lambda c=1.0: 0,
                              "orlicz": "bounded"}),
        FunctionCatalogEntry("cos", _cos, (1,),
                             {"band_limited": True, "degree": lambda m=1: int(m),
                              "orlicz": "bounded"}),
        FunctionCatalogEntry("sin", _sin, (1,),
                             {"band_limited": True, "degree": lambda m=1: int(m),
                              "orlicz": "bounded"}),
        FunctionCatalogEntry("cos_sum", _cos_sum, (),
                             {"band_limited": True, "degree": lambda: 1,
                              "orlicz": "bounded"}),
        FunctionCatalogEntry("trig_mix", _trig_mix, (),
                             {"band_limited": True, "degree": lambda: 4,
                              "orlicz": "bounded"}),
        FunctionCatalogEntry("square", _square, (15,),
                             {"band_limited": True, "degree": lambda K=15: int(K),
                              "orlicz": "bounded; limit is bounded"}),
        FunctionCatalogEntry("sawtooth", _sawtooth, (16,),
                             {"band_limited": True, "degree": lambda K=16: int(K),
                              "orlicz": "bounded; limit is bounded"}),
        FunctionCatalogEntry("logsing", _logsing, (16,),
                             {"band_limited": True, "degree": lambda K=16: int(K),
                              "orlicz": "limit is exp-integrable, in every Log_k(L)",
                              "singular_model": True}),
        FunctionCatalogEntry("random", _random, (6, 0),
                             {"band_limited": True, "degree": lambda deg=6, seed=0: int(deg),
                              "orlicz": "bounded"}),
    ]
}


def parse_function_id(spec: str) -> tuple[FunctionCatalogEntry, tuple]:
    name, _, rest = spec.partition(":")
    if name not in CATALOG:
        raise KeyError(f"unknown function id {name!r}; known: {', '.join(sorted(CATALOG))}")
    entry = CATALOG[name]
    params = tuple(float(p) for p in rest.split(",")) if rest else entry.defaults
    params = tuple(int(p) if float(p).is_integer() and name != "const" else p for p in params)
    return entry, params


def make_function(spec: str, grid: TorusGrid) -> SampledField:
    entry, params = parse_function_id(spec)
    deg = entry.degree(*params)
    if deg >= grid.points_per_axis // 2:
        raise ValueError(
            f"{spec} has degree {deg}, not representable on N={grid.points_per_axis}")
    return sample(grid, entry.build(*params))


def is_singular_model(spec: str) -> bool:
    entry, _ = parse_function_id(spec)
    return bool(entry.metadata.get("singular_model"))


# 1-D degrees fit N = 256; 2-D degrees saturate by the midpoint of an n <= 24 sweep
SUITE_1D = ("const:2.0", "cos:1", "sin:3", "trig_mix", "square:63", "sawtooth:64",
            "logsing:64", "logsing:127", "random:8,1")
SUITE_2D = ("const:2.0", "cos:1", "cos_sum", "trig_mix", "square:11", "sawtooth:12",
            "logsing:12", "random:5,1")
