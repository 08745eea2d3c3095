import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lightclock.cavity import (AccumulatedPhase, ModeBasis, accumulated_phase, coupling_matrices,
                               kg_inner_product, mode_derivative, mode_frequency, mode_function)
from lightclock.errors import DomainError
from lightclock.motion import PrescribedMotion


def _oracle(basis, n):
    A = np.zeros((2, n, n), complex)
    B = np.zeros((2, n, n), complex)
    for j in (1, 2):
        for m in range(1, n + 1):
            d = mode_derivative(basis, m, j)
            for k in range(1, n + 1):
                A[j - 1, m - 1, k - 1] = kg_inner_product(d, mode_function(basis, k), basis)
                B[j - 1, m - 1, k - 1] = -kg_inner_product(d, mode_function(basis, k, True), basis)
    return A, B


def test_couplings_match_inner_product_oracle():
    basis = ModeBasis(0.3, 2.3, 6)
    cm = coupling_matrices(basis)
    A, B = _oracle(basis, 6)
    scale = np.max(np.abs(cm.A))
    assert np.max(np.abs(A - cm.A)) <= 1e-9 * scale
    assert np.max(np.abs(B - cm.B)) <= 1e-9 * scale


def test_known_entries():
    L = 1.7
    cm = coupling_matrices(ModeBasis(0.0, L, 3))
    assert cm.A[1, 0, 1] == pytest.approx(-np.sqrt(2) / L, rel=1e-13)
    assert cm.B[0, 0, 0] == pytest.approx(-1 / (2 * L), rel=1e-13)
    assert cm.B[1, 0, 0] == pytest.approx(1 / (2 * L), rel=1e-13)


def test_structure_antihermitian_and_symmetric():
    cm = coupling_matrices(ModeBasis(0.0, 1.0, 12))
    for j in (0, 1):
        assert np.allclose(cm.A[j], -cm.A[j].T, atol=1e-14)
        assert np.allclose(cm.B[j], cm.B[j].T, atol=1e-14)


def test_translation_invariance_and_scaling():
    a = coupling_matrices(ModeBasis(0.0, 2.0, 5))
    b = coupling_matrices(ModeBasis(1e6, 1e6 + 2.0, 5))
    assert np.allclose(a.A, b.A, rtol=1e-9, atol=1e-12)
    c = coupling_matrices(ModeBasis(0.0, 1.0, 5)).at_length(2.0)
    assert np.allclose(c.A, a.A, atol=1e-14) and np.allclose(c.B, a.B, atol=1e-14)


@settings(max_examples=25, deadline=None)
@given(st.floats(1e-7, 10.0))
def test_couplings_scale_inversely_with_length(L):
    a = coupling_matrices(ModeBasis(0.0, 1.0, 4))
    b = coupling_matrices(ModeBasis(0.0, L, 4))
    assert np.allclose(b.A * L, a.A, rtol=1e-12, atol=1e-14)


def test_orthonormality():
    basis = ModeBasis(0.0, 3.0, 5)
    G = np.array([[kg_inner_product(mode_function(basis, m), mode_function(basis, n), basis)
                   for n in range(1, 6)] for m in range(1, 6)])
    assert np.max(np.abs(G - np.eye(5))) < 1e-12
    neg = kg_inner_product(mode_function(basis, 2, True), mode_function(basis, 2, True), basis)
    assert neg == pytest.approx(-1.0, abs=1e-12)


def test_static_phase_and_reduction():
    mot = PrescribedMotion.static(4.73, 1.0)
    ph = AccumulatedPhase(mot)
    T = 4.73
    assert ph(T) == pytest.approx(np.pi * mot.c * T, rel=1e-15)
    k, r = ph.reduced(T)
    assert 0 <= r < 2 * np.pi
    assert accumulated_phase(mot, 2, T) == pytest.approx(2 * ph(T))
    assert mode_frequency(mot, 3, 0.0) == pytest.approx(3 * np.pi * mot.c)
    with pytest.raises(DomainError):
        mode_frequency(mot, 0, 0.0)


def test_phase_drift_for_uniform_stretch():
    # length L0 + u t: drift = (c pi / u) ln(1 + u t / L0) - omega0 t
    u, L0, c = 1e-3, 1.0, 10.0
    mot = PrescribedMotion.uniform(2.0, L0, 0.0, u, c=c)
    ph = AccumulatedPhase(mot, 48)
    t = 2.0
    exact = c * np.pi / u * np.log1p(u * t / L0) - c * np.pi / L0 * t
    assert ph.drift(t) == pytest.approx(exact, rel=1e-11)
