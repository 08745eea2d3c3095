import numpy as np
import pytest

from lightclock import oracles
from lightclock.bogoliubov import (apply_prefactor, first_order_coefficients,
                                   perturbative_bogoliubov, second_order_coefficients,
                                   strip_prefactor, symplectic_defect)
from lightclock.errors import DomainError, MethodInfeasibleError
from lightclock.motion import PrescribedMotion


@pytest.fixture(scope="module")
def ramp_coeffs(ramp):
    return perturbative_bogoliubov(ramp, 4, 8, nodes=48)


@pytest.mark.parametrize("m,n", [(1, 2), (2, 1), (1, 3), (3, 4)])
def test_first_order_vs_quadrature(ramp, ramp_coeffs, m, n):
    for kind, mat in (("alpha", ramp_coeffs.alpha1), ("beta", ramp_coeffs.beta1)):
        ref = oracles.direct_first_order(ramp, m, n, kind)
        assert abs(mat[m - 1, n - 1] - ref) <= 1e-8 * abs(ref)


def test_second_order_vs_nested(ramp, ramp_coeffs):
    ref = oracles.nested_clock_mode(ramp, 8, t_eval=[0.37, 1.0])
    for key, val in (("alpha2", ramp_coeffs.alpha2[0, 0]), ("beta2", ramp_coeffs.beta2[0, 0]),
                     ("beta1", ramp_coeffs.beta1[0, 0])):
        assert abs(val - ref[key][-1]) <= 1e-6 * abs(ref[key][-1])
    s = ramp_coeffs.clock_mode_series(np.array([0.37]))
    assert abs(s.alpha2[0] - ref["alpha2"][0]) <= 1e-6 * abs(ref["alpha2"][0])
    assert abs(s.beta2[0] - ref["beta2"][0]) <= 1e-6 * abs(ref["beta2"][0])


def test_methods_agree(ramp):
    a = perturbative_bogoliubov(ramp, 4, 8, method="levin", keep_series=False)
    b = perturbative_bogoliubov(PrescribedMotion.smooth_ramp(1.0, 1.0, 0.3, 0.5, c=3000.0),
                                4, 8, method="asymptotic", keep_series=False)
    c = perturbative_bogoliubov(PrescribedMotion.smooth_ramp(1.0, 1.0, 0.3, 0.5, c=3000.0),
                                4, 8, method="levin", keep_series=False)
    assert np.allclose(b.alpha2, c.alpha2, rtol=0, atol=1e-10 * np.max(np.abs(c.alpha2)))
    assert np.isfinite(a.alpha2).all()


@pytest.mark.parametrize("eps", [0.5, 0.25, 1 / 3])
def test_velocity_scaling(ramp, ramp_coeffs, eps):
    co = perturbative_bogoliubov(ramp.scaled(eps), 4, 8, nodes=48, keep_series=False)
    s1 = np.max(np.abs(ramp_coeffs.beta1))
    s2 = np.max(np.abs(ramp_coeffs.alpha2))
    assert np.max(np.abs(co.alpha1 - eps * ramp_coeffs.alpha1)) <= 1e-8 * s1 * eps
    assert np.max(np.abs(co.beta1 - eps * ramp_coeffs.beta1)) <= 1e-8 * s1 * eps
    assert np.max(np.abs(co.alpha2 - eps ** 2 * ramp_coeffs.alpha2)) <= 1e-6 * s2 * eps ** 2
    assert np.max(np.abs(co.beta2 - eps ** 2 * ramp_coeffs.beta2)) <= 1e-6 * s2 * eps ** 2


def test_symplectic_identities(ramp_coeffs):
    d = symplectic_defect(ramp_coeffs)
    assert d.first_order <= 1e-12
    assert d.second_order <= 1e-12


def test_truncation_defect_decreases(toy_traj):
    ref = perturbative_bogoliubov(toy_traj, 20, 160, keep_series=False)
    seq = [symplectic_defect(perturbative_bogoliubov(toy_traj, 20, P, keep_series=False),
                             ref).second_order for P in (20, 40, 80)]
    assert seq[0] > seq[1] > seq[2]


def test_reference_must_be_larger(ramp_coeffs, ramp):
    small = perturbative_bogoliubov(ramp, 2, 4, keep_series=False)
    with pytest.raises(DomainError):
        symplectic_defect(ramp_coeffs, small)


def test_strip_roundtrip(ramp, rng):
    raw = [rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) for _ in range(4)]
    for theta in (1.234, (17.0, 0.5)):
        back = apply_prefactor(*strip_prefactor(*raw, theta), theta)
        for a, b in zip(raw, back):
            assert np.allclose(a, b, atol=1e-14)


def test_raw_functions_match_stripped(ramp, ramp_coeffs):
    a1, b1 = first_order_coefficients(ramp, n_max=4, nodes=48)
    a2, b2 = second_order_coefficients(ramp, n_max=4, p_max=8, nodes=48)
    st = strip_prefactor(a1, a2, b1, b2, ramp_coeffs.theta_cl_turns)
    assert np.allclose(st[0], ramp_coeffs.alpha1, atol=1e-15)
    assert np.allclose(st[1], ramp_coeffs.alpha2, atol=1e-15)
    assert np.allclose(st[3], ramp_coeffs.beta2, atol=1e-15)


def test_static_motion_is_trivial():
    co = perturbative_bogoliubov(PrescribedMotion.static(1.0, 1.0), 4, 8, keep_series=False)
    for m in (co.alpha1, co.alpha2, co.beta1, co.beta2):
        assert not np.any(m)


def test_direct_oracle_refuses_full_scale(earth_traj):
    with pytest.raises(MethodInfeasibleError):
        oracles.nested_clock_mode(earth_traj, 4)


def test_earth_values(earth_coeffs):
    # second-order (1,1) shift dominates; first-order (1,1) mixing vanishes
    assert earth_coeffs.alpha1[0, 0] == 0
    assert abs(earth_coeffs.beta1[0, 0]) < 1e-13
    assert -4e-5 < earth_coeffs.alpha2[0, 0].imag < -3e-5
