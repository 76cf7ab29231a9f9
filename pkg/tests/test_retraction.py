import math

import numpy as np
import pytest

from realfano.retraction import (
    NegativeRadicand,
    NotOnVariety,
    path_residual_enclosure,
    residuals,
    retract_path,
    retract_path_enclosure,
    variety_point,
)

TIMES = (0.0, 0.25, 0.5, 0.75, 1.0)


def test_origin_is_fixed():
    for t in TIMES:
        assert retract_path((0.0,) * 6, t) == (0.0,) * 6


def test_endpoint_is_exact_origin():
    p = variety_point((0.1, -0.2, 0.05))
    assert retract_path(p, 1.0) == (0.0,) * 6


def test_start_is_input():
    p = variety_point((0.1, 0.1, 0.1))
    assert np.allclose(retract_path(p, 0.0), p, atol=1e-15)


def test_fixed_point_oracle_residual():
    p = variety_point((0.1, 0.1, 0.1))
    assert max(abs(r) for r in residuals(p)) < 1e-15


def test_residual_enclosures_contain_zero():
    p = variety_point((0.1, 0.1, 0.1))
    for t in TIMES:
        for e in path_residual_enclosure(p, t):
            assert e.lo <= 0 <= e.hi
            assert e.width <= 1e-8


def test_sign_of_b_is_kept():
    p = variety_point((0.3, -0.2, 0.1))
    q = retract_path(p, 0.5)
    assert [math.copysign(1, q[k]) for k in (1, 3, 5)] == [1, -1, 1]


def test_enclosure_contains_float_path():
    p = variety_point((0.2, 0.15, -0.1))
    for t in TIMES:
        pt = retract_path(p, t)
        enc = retract_path_enclosure(p, t)
        for x, e in zip(pt, enc):
            assert e.lo - 1e-15 <= x <= e.hi + 1e-15


def test_off_variety_point_rejected():
    with pytest.raises(NotOnVariety):
        retract_path((1.0, 0, 0, 0, 0, 0), 0.5)


def test_negative_radicand_enclosure():
    # off the variety the b-radicand can be negative
    with pytest.raises(NegativeRadicand):
        retract_path_enclosure((0.0, 0.0, 1.0, 0.0, 0.0, 0.0), 0.5)


@pytest.mark.parametrize("t", [-0.1, 1.5])
def test_t_out_of_range(t):
    with pytest.raises(ValueError):
        retract_path((0.0,) * 6, t)


def test_wrong_arity_and_divergence():
    with pytest.raises(ValueError):
        retract_path((0.0,) * 5, 0.5)
    with pytest.raises(ValueError):
        variety_point((3.0, 3.0, 3.0))
