import math

import numpy as np
import pytest

from torus_harmonics import oracles
from torus_harmonics.torus import SampledField, make_grid, sample


def test_config_validation():
    with pytest.raises(ValueError):
        oracles.OracleConfig(oversample=2)


def test_direct_sum_cost_cap():
    f = sample(make_grid(2, 32), lambda a, b: np.cos(a))
    with pytest.raises(ValueError, match="exceeds cap"):
        oracles.direct_partial_sum(f, 15, config=oracles.OracleConfig(direct_sum_cap=1000))


def test_unknown_weights():
    f = sample(make_grid(1, 8), np.cos)
    with pytest.raises(ValueError):
        oracles.direct_partial_sum(f, 2, weights="fejer")


def test_kernel_multipliers():
    # conjugate kernel: multiplier 0 on cos, the modified U cosine kernel halves at m = n
    assert abs(oracles.kernel_multiplier(oracles.conjugate_kernel, 3)) < 1e-12
    n = 4
    ker = oracles.u_kernel("sine", n)
    assert oracles.kernel_multiplier(ker, n) == pytest.approx(0.5, abs=1e-6)
    assert oracles.kernel_multiplier(ker, n - 1) == pytest.approx(1.0, abs=1e-6)
    assert oracles.kernel_multiplier(ker, n + 1) == pytest.approx(0.0, abs=1e-6)


def test_brute_maximal_small_case():
    out = oracles.brute_maximal_1d(np.array([0.0, 3.0, 0.0, 1.0]))
    # node 3 sees the wrapped arc {3, 0, 1}
    assert np.allclose(out, [1.5, 3.0, 1.5, 4.0 / 3.0])


def test_constant_norm_solves_equation():
    val = oracles.constant_field_norm_k1(1.0, 2 * math.pi)
    u = 1.0 / val
    assert 2 * math.pi * u * math.log(u) == pytest.approx(1.0, abs=1e-12)


def test_brute_luxemburg_zero():
    assert oracles.brute_luxemburg(SampledField(make_grid(1, 8), np.zeros(8)), 1) == 0.0
