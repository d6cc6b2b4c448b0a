import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torus_harmonics.torus import (GridMask, SampledField, TorusGrid, integrate, lp_norm,
                                   make_grid, measure_where, read_field_csv, sample,
                                   write_field_csv)


@pytest.mark.parametrize("d,N", [(0, 8), (4, 8), (1, 4), (1, 12), (2, 100)])
def test_grid_rejects_bad_shapes(d, N):
    with pytest.raises(ValueError):
        TorusGrid(d, N)


def test_grid_geometry():
    g = make_grid(2, 16)
    assert g.shape == (16, 16) and g.size == 256
    assert g.cell_measure == pytest.approx((2 * math.pi / 16) ** 2)
    assert g.cell_measure * g.size == pytest.approx(g.total_measure)
    x1, x2 = g.coordinates()
    assert x1[3, 0] == pytest.approx(3 * g.spacing) and x2[0, 5] == pytest.approx(5 * g.spacing)


def test_sample_broadcasts_scalars():
    f = sample(make_grid(2, 8), lambda x1, x2: 3.0)
    assert f.values.shape == (8, 8) and np.all(f.values == 3.0)


def test_sample_reports_nonfinite_node():
    with pytest.raises(ValueError, match="node 0"):
        with np.errstate(divide="ignore"):
            sample(make_grid(1, 8), lambda x: 1.0 / x)


def test_field_is_read_only_and_validated():
    g = make_grid(1, 8)
    f = SampledField(g, np.arange(8.0))
    with pytest.raises(ValueError):
        f.values[0] = 1.0
    with pytest.raises(ValueError):
        SampledField(g, np.arange(7.0))
    with pytest.raises(ValueError, match="node 2"):
        SampledField(g, [0, 0, np.nan, 0, 0, 0, 0, 0])


def test_arithmetic_checks_grid():
    a = sample(make_grid(1, 8), np.cos)
    b = sample(make_grid(1, 16), np.cos)
    with pytest.raises(ValueError, match="grid mismatch"):
        a + b
    assert np.allclose((2 * a - a).values, a.values)
    assert np.all(abs(-a).values >= 0)


def test_integrate_rectangle_rule_exact_on_trig():
    for d in (1, 2, 3):
        g = make_grid(d, 8)
        assert integrate(sample(g, lambda *x: 1.0)) == pytest.approx(g.total_measure)
        assert abs(integrate(sample(g, lambda *x: np.cos(3 * x[0])))) < 1e-12


def test_lp_norms_and_measure():
    g = make_grid(1, 64)
    f = sample(g, lambda x: 2.0 + 0 * x)
    assert lp_norm(f, 1) == pytest.approx(4 * math.pi)
    assert lp_norm(f, 2) == pytest.approx(2 * math.sqrt(2 * math.pi))
    assert lp_norm(f, math.inf) == 2.0
    c = sample(g, np.cos)
    # |x| < pi/3 holds at nodes -10..10
    assert measure_where(c, lambda v: v > 0.5) == pytest.approx(21 * g.spacing)


def test_roll_translates():
    g = make_grid(1, 16)
    f = sample(g, np.sin)
    shifted = sample(g, lambda x: np.sin(x - 2 * g.spacing))
    assert np.allclose(f.roll((2,)).values, shifted.values)


def test_mask_measures_and_order():
    g = make_grid(1, 8)
    small = GridMask(g, np.arange(8) < 3)
    big = GridMask(g, np.arange(8) < 5)
    assert small.count == 3
    assert small.measure + small.complement_measure == pytest.approx(g.total_measure)
    assert small <= big and not big <= small
    assert GridMask.full(g).complement_measure == 0


@pytest.mark.parametrize("d", [1, 2])
def test_csv_round_trip(tmp_path, d):
    f = sample(make_grid(d, 8), lambda *x: np.exp(np.sin(sum(x))) / 3)
    write_field_csv(f, tmp_path / "f.csv")
    g = read_field_csv(tmp_path / "f.csv")
    assert g.grid == f.grid and np.array_equal(g.values, f.values)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6), min_size=16, max_size=16), st.floats(-100, 100))
def test_integrate_is_linear(vals, a):
    g = make_grid(1, 16)
    f = SampledField(g, vals)
    one = sample(g, lambda x: 1.0)
    lhs = integrate(f * a + one)
    assert lhs == pytest.approx(a * integrate(f) + g.total_measure, rel=1e-9, abs=1e-6)
