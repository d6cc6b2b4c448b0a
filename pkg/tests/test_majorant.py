import json
import math

import numpy as np
import pytest

from torus_harmonics.catalog import make_function
from torus_harmonics.majorant import (FLOOR_SCALE, PART_NAMES, exceptional_set,
                                      exceptional_threshold, lemma2_envelope, majorant,
                                      majorant_1d, majorant_2d, majorant_floor, write_majorant)
from torus_harmonics.singular import conjugate_dd, hl_maximal_1d
from torus_harmonics.torus import lp_norm, make_grid, sample


@pytest.fixture(scope="module")
def field2d():
    return make_function("logsing:6", make_grid(2, 32))


@pytest.fixture(scope="module")
def F2d(field2d):
    return majorant_2d(field2d, 10)


def test_one_dimensional_majorant_is_maximal_function():
    f = make_function("square:15", make_grid(1, 64))
    F = majorant_1d(f)
    assert F.scale == 1.0
    assert np.allclose(F.values, hl_maximal_1d(f).values + majorant_floor(f), rtol=0, atol=0)
    assert majorant(f).values.tolist() == F.values.tolist()


def test_floor_value():
    f = sample(make_grid(1, 8), lambda x: 0.0)
    assert majorant_floor(f) == FLOOR_SCALE
    assert np.all(majorant_1d(f).values == FLOOR_SCALE)


def test_two_dimensional_assembly(field2d, F2d):
    total = sum(F2d.parts[name].values for name in PART_NAMES)
    assert np.allclose(F2d.values, 4 * total + F2d.floor)
    assert np.all(F2d.values > 0)
    assert np.array_equal(F2d.parts["G"].values, np.abs(conjugate_dd(field2d).values))
    comps = F2d.components
    assert np.allclose(F2d.parts["F3"].values,
                       comps["F3a"].values + comps["F3b"].values + comps["F3c"].values)
    masses = F2d.masses()
    assert set(masses) == set(PART_NAMES) and all(v >= 0 for v in masses.values())


def test_f3a_is_constant_along_x1(F2d):
    a = F2d.components["F3a"].values
    assert np.all(a == a[0:1, :])


def test_envelope_dominates_each_gap(field2d, F2d):
    env = lemma2_envelope(field2d, 10).values
    assert np.array_equal(env, F2d.components["F3b"].values)
    assert np.all(env >= 0)


def test_constant_field_majorant_is_not_degenerate():
    f = sample(make_grid(2, 16), lambda a, b: 2.0)
    F = majorant_2d(f, 4)
    expect = 4 * lp_norm(f, 1) / (2 * math.pi) ** 2 + majorant_floor(f)
    assert np.allclose(F.values, expect)


def test_preconditions():
    f3 = sample(make_grid(3, 8), lambda a, b, c: a)
    with pytest.raises(ValueError, match="d <= 2"):
        majorant_2d(f3, 2)
    f2 = sample(make_grid(2, 16), lambda a, b: a)
    with pytest.raises(ValueError):
        majorant_2d(f2, 8)
    with pytest.raises(ValueError):
        majorant(f2)


@pytest.mark.parametrize("eps", [0.5, 0.1, 2.0])
def test_exceptional_set_counts(F2d, eps):
    E = exceptional_set(F2d, eps)
    assert E.complement_measure <= eps
    # leaving out one more node would exceed eps
    assert E.complement_measure + E.grid.cell_measure > eps or E.count == 0
    tau = exceptional_threshold(F2d, E)
    assert np.all(F2d.values[E.included] <= tau)


def test_exceptional_sets_nest(F2d):
    assert exceptional_set(F2d, 0.5) <= exceptional_set(F2d, 0.1)
    with pytest.raises(ValueError):
        exceptional_set(F2d, 0.0)


def test_write_majorant(tmp_path, F2d):
    write_majorant(F2d, tmp_path / "F.csv", tmp_path / "F.json")
    meta = json.loads((tmp_path / "F.json").read_text())
    assert meta["scale"] == 4.0 and set(meta["l1_mass"]) == set(PART_NAMES)
    assert len((tmp_path / "F.csv").read_text().splitlines()) == 32 * 32 + 1
