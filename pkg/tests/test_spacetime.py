import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lightclock.errors import DomainError
from lightclock.spacetime import (EARTH_MASS, EARTH_RADIUS, SchwarzschildGeometry, lapse,
                                  radius_from_tortoise, static_proper_acceleration,
                                  static_proper_time, tidal_acceleration, tortoise,
                                  tortoise_difference)

EARTH = SchwarzschildGeometry.earth()


def test_earth_radius_value():
    assert EARTH.r_s == pytest.approx(8.87e-3, rel=1e-3)
    assert EARTH.mass == pytest.approx(EARTH_MASS, rel=1e-12)


def test_lapse_limits():
    g = SchwarzschildGeometry(2.0)
    assert lapse(g, 4.0) == pytest.approx(0.5)
    assert lapse(SchwarzschildGeometry(0.0), 10.0) == 1.0
    with pytest.raises(DomainError):
        lapse(g, 2.0)
    with pytest.raises(DomainError):
        lapse(g, 1.0)


def test_tortoise_flat_is_identity():
    assert tortoise(SchwarzschildGeometry(0.0), 123.5) == 123.5


def test_tortoise_derivative_is_inverse_lapse():
    g = SchwarzschildGeometry(3.0)
    r, h = 10.0, 1e-5
    d = (tortoise(g, r + h) - tortoise(g, r - h)) / (2 * h)
    assert d == pytest.approx(1 / lapse(g, r), rel=1e-9)


def test_tortoise_difference_matches_mpmath_scale():
    dx = tortoise_difference(EARTH, EARTH_RADIUS, 1.0)
    # 1 m of r near Earth: dx = 1/f to first order
    assert dx == pytest.approx(1.0 / lapse(EARTH, EARTH_RADIUS), rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.floats(1.001, 1e6), st.floats(1e-3, 1e3))
def test_tortoise_roundtrip(ratio, rs):
    g = SchwarzschildGeometry(rs)
    r = rs * ratio
    back = radius_from_tortoise(g, tortoise(g, r))
    assert abs(back - r) <= max(1e-9, 1e-12 * r) + 8 * np.spacing(tortoise(g, r))


def test_roundtrip_earth_scale():
    x = tortoise(EARTH, EARTH_RADIUS + 110.0)
    assert radius_from_tortoise(EARTH, x) == pytest.approx(EARTH_RADIUS + 110.0, abs=4e-9)


def test_static_acceleration_is_newtonian_in_weak_field():
    a = static_proper_acceleration(EARTH, EARTH_RADIUS)
    g_newton = 6.67430e-11 * EARTH_MASS / EARTH_RADIUS ** 2
    assert a == pytest.approx(g_newton, rel=1e-8)


def test_tidal_acceleration_linear_in_length():
    a1 = tidal_acceleration(EARTH, EARTH_RADIUS, 1.0)
    a2 = tidal_acceleration(EARTH, EARTH_RADIUS, 2.0)
    assert a2 == pytest.approx(2 * a1)
    assert a1 == pytest.approx(2 * 9.83 / EARTH_RADIUS, rel=1e-2)


def test_static_proper_time():
    g = SchwarzschildGeometry(1.0)
    assert static_proper_time(g, 4.0, 2.0) == pytest.approx(2.0 * math.sqrt(0.75))
