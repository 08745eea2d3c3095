"""Chebyshev grid, compensated arithmetic and the oscillatory-integral methods."""

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lightclock import compensated as cp
from lightclock.chebyshev import ChebyshevGrid
from lightclock.errors import MethodInfeasibleError, RemainderTooLargeError
from lightclock.oscillatory import (OscillatoryIntegralSpec, antiderivative,
                                    asymptotic_antiderivative, oscillatory_integral)


def test_chebyshev_calculus():
    g = ChebyshevGrid(0.0, 2.0, 40)
    x = g.nodes
    assert np.max(np.abs(g.derivative(np.sin(x)) - np.cos(x))) < 1e-10
    assert np.max(np.abs(g.cumulative_integral(np.cos(x)) - np.sin(x))) < 1e-13
    assert g.integral(np.exp(x)) == pytest.approx(np.e ** 2 - 1, rel=1e-14)


def test_chebyshev_interpolation_at_and_between_nodes():
    g = ChebyshevGrid(-1.0, 3.0, 32)
    f = np.exp(-g.nodes ** 2)
    t = np.concatenate([g.nodes[:3], np.linspace(-1, 3, 17)])
    assert np.max(np.abs(g.evaluate(f, t) - np.exp(-t ** 2))) < 1e-9


def test_chebyshev_trailing_shape():
    g = ChebyshevGrid(0.0, 1.0, 16)
    v = np.stack([g.nodes, g.nodes ** 2], axis=1)[:, :, None] * np.ones((1, 1, 3))
    assert g.cumulative_integral(v).shape == v.shape


def test_two_prod_exact():
    a, b = 0.1, 3.0000000000000004
    h, l = cp.two_prod(a, b)
    exact = mpmath.mpf(a) * mpmath.mpf(b)
    assert mpmath.mpf(h) + mpmath.mpf(l) == exact


@settings(max_examples=50, deadline=None)
@given(st.floats(1e3, 1e12))
def test_reduce_two_pi_matches_mpmath(x):
    mpmath.mp.dps = 40
    k, r = cp.reduce_two_pi(x, 0.0)
    exact = mpmath.mpf(x) - mpmath.floor(mpmath.mpf(x) / (2 * mpmath.pi)) * 2 * mpmath.pi
    assert abs(float(exact) - r) < 1e-15 * max(1.0, abs(r)) + 1e-15


def test_neumaier_sum():
    vals = [1e16, 1.0, -1e16] * 10
    assert cp.neumaier_sum(vals) == 10.0


def _spec(method, omega=1e3, T=10.0):
    return OscillatoryIntegralSpec(envelope=lambda t: t ** 2 * np.exp(-t),
                                   phase=lambda t: omega * t, omega=lambda t: omega + 0 * t,
                                   interval=(0.0, T), method=method)


def _exact(omega=1e3, T=10.0):
    # \int_0^T t^2 e^{-a t} dt with a = 1 + i omega, in closed form
    mpmath.mp.dps = 30
    a = mpmath.mpc(1, omega)
    F = lambda t: -mpmath.exp(-a * t) * (t ** 2 / a + 2 * t / a ** 2 + 2 / a ** 3)
    return complex(F(T) - F(0))


@pytest.mark.parametrize("method", ["direct", "filon", "levin", "asymptotic"])
def test_all_methods_agree(method):
    ref = _exact()
    res = oscillatory_integral(_spec(method))
    assert abs(res.value - ref) <= 1e-9 * abs(ref)


def test_direct_refuses_huge_swing():
    with pytest.raises(MethodInfeasibleError):
        oscillatory_integral(_spec("direct", omega=1e8))


def test_levin_handles_full_scale_swing():
    # constant envelope: exact answer known in closed form
    w, T = 9.4e8, 4.73
    spec = OscillatoryIntegralSpec(lambda t: 1.0 + 0 * t, lambda t: w * t, lambda t: w + 0 * t,
                                   (0.0, T), "levin")
    mpmath.mp.dps = 40
    ph = mpmath.mpf(w * T)   # the same rounded phase the callback returns
    exact = complex((mpmath.exp(-1j * ph) - 1) / (-1j * mpmath.mpf(w)))
    res = oscillatory_integral(spec)
    assert abs(res.value - exact) <= 1e-12 * abs(exact)


def test_zero_swing_is_plain_integral():
    spec = OscillatoryIntegralSpec(lambda t: t, lambda t: 0 * t, lambda t: 0 * t, (0.0, 2.0))
    assert oscillatory_integral(spec).value == pytest.approx(2.0)


def test_antiderivative_q_zero_is_cumulative():
    g = ChebyshevGrid(0.0, 1.0, 24)
    S = np.cos(g.nodes)[:, None]
    res = antiderivative(g, 0.0, np.ones(24), S, "levin")
    assert np.allclose(res.R[:, 0], np.sin(g.nodes), atol=1e-14)


def test_asymptotic_reports_stall():
    g = ChebyshevGrid(0.0, 1.0, 24)
    with pytest.raises(RemainderTooLargeError):
        asymptotic_antiderivative(g, np.full(24, 0.5), np.exp(g.nodes)[:, None] + 0j,
                                  tol=1e-15)


def test_levin_and_asymptotic_agree_on_batch():
    g = ChebyshevGrid(0.0, 2.0, 48)
    om = 1e5 * (1 + 0.1 * g.nodes)
    S = np.stack([np.exp(-g.nodes), g.nodes ** 3], axis=1) + 0j
    a = antiderivative(g, 3.0, om, S, "levin").R
    b = antiderivative(g, 3.0, om, S, "asymptotic").R
    assert np.max(np.abs(a - b)) <= 1e-12 * np.max(np.abs(a))
