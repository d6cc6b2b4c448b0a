"""Flat ``key = value`` experiment configuration.

Lines starting with ``#`` are comments. Values are written with ``repr`` for
floats so that a write/read cycle reproduces every field exactly.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field, fields
from pathlib import Path

_INT_FIELDS = {"dim", "grid_n", "n_min", "n_max", "k", "seed", "k_start"}
_FLOAT_FIELDS = {"eps", "c", "A", "budget"}
_LIST_FIELDS = {"subsequence"}


@dataclass
class ExperimentConfig:
    experiment: str = "verify-theorem1"
    dim: int = 1
    grid_n: int = 64
    function_id: str = "cos:1"
    n_min: int = 1
    n_max: int = 8
    subsequence: list = field(default_factory=list)
    k_start: int = 2
    eps: float = 0.5
    k: int = 1
    c: float = 1.0
    A: float = 1.0
    budget: float = 0.0
    output: str = ""
    seed: int = 0

    @property
    def n_range(self) -> range:
        return range(self.n_min, self.n_max + 1)

    def validate(self) -> "ExperimentConfig":
        if self.dim not in (1, 2, 3):
            raise ValueError(f"dim must be 1, 2 or 3, got {self.dim}")
        if self.n_min < 0 or self.n_max < self.n_min:
            raise ValueError(f"bad n range [{self.n_min}, {self.n_max}]")
        return self

    def replace(self, **overrides) -> "ExperimentConfig":
        clean = {k: v for k, v in overrides.items() if v is not None}
        return dataclasses.replace(self, **clean)

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name in _LIST_FIELDS:
                v = ",".join(str(int(x)) for x in v)
            elif f.name in _FLOAT_FIELDS:
                v = repr(float(v))
            lines.append(f"{f.name} = {v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        values = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if not sep or key not in known:
                raise ValueError(f"config line {lineno}: cannot parse {raw!r}")
            values[key] = _coerce(key, val)
        return cls(**values)

    def save(self, path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        return cls.from_text(Path(path).read_text())


def _coerce(key: str, val: str):
    if key in _INT_FIELDS:
        return int(val)
    if key in _FLOAT_FIELDS:
        return float(val)
    if key in _LIST_FIELDS:
        return [int(v) for v in val.split(",") if v.strip()]
    return val
