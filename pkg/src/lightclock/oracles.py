"""Brute-force reference computations for the toy regime.

These deliberately avoid the Chebyshev machinery: the phase comes from its
own ODE solve, single integrals from adaptive quadrature, and the
time-ordered double integrals from integrating the nested system
d/dt (inner, outer) directly.  Cost grows with the number of oscillations,
so they are only usable for small phase swings.
"""

from __future__ import annotations

import warnings

import numpy as np
from scipy import integrate, interpolate

from .cavity import CouplingMatrices, ModeBasis, coupling_matrices
from .errors import MethodInfeasibleError
from .motion import CavityMotion

MAX_SWING = 1e6
TABLE_POINTS = 20_001


class _MotionTable:
    """Dense cubic-spline table of (v1, v2, stretch) for cheap scalar lookup."""

    def __init__(self, motion: CavityMotion, points: int = TABLE_POINTS):
        self.motion = motion
        self.length0, self.c, self.duration = motion.length0, motion.c, motion.duration
        t = np.linspace(0.0, motion.duration, points)
        s = motion.sample(t)
        self._spl = interpolate.CubicSpline(t, np.stack([s.v1, s.v2, s.stretch], axis=1))

    def __call__(self, t):
        return self._spl(t)

    def omega1(self, t):
        return self.c * np.pi / (self.length0 + self._spl(t)[2])


def phase_solution(motion, rtol: float = 1e-13):
    """Dense solution of dTheta_1/dt = omega_1(t), Theta_1(0) = 0."""
    tab = motion if isinstance(motion, _MotionTable) else _MotionTable(motion)
    T = tab.duration
    w0 = tab.c * np.pi / tab.length0
    sol = integrate.solve_ivp(lambda t, y: [tab.omega1(t) - w0], (0.0, T),
                              [0.0], method="DOP853", rtol=rtol,
                              atol=1e-14 * max(abs(w0) * T, 1.0), dense_output=True)
    return lambda t: w0 * np.asarray(t) + sol.sol(t)[0]


def _couplings(motion, P, couplings):
    cm = couplings or coupling_matrices(ModeBasis(0.0, motion.length0, P))
    cm = cm.at_length(motion.length0)
    return cm.A[:, :P, :P], cm.B[:, :P, :P]


def _velocity_terms(tab, t, coupling_mode):
    v1, v2, stretch = tab(t)
    scale = tab.length0 / (tab.length0 + stretch) if coupling_mode == "instantaneous" else 1.0
    return v1 * scale, v2 * scale


def direct_first_order(motion: CavityMotion, m: int, n: int, kind: str = "alpha",
                       couplings: CouplingMatrices | None = None,
                       coupling_mode: str = "instantaneous", rtol: float = 1e-12):
    """Barred first-order (m, n) entry by adaptive quadrature."""
    P = max(m, n)
    A, B = _couplings(motion, P, couplings)
    M = A if kind == "alpha" else B
    sign = -1 if kind == "alpha" else 1
    tab = _MotionTable(motion)
    theta = phase_solution(tab)
    T = motion.duration
    q = m + sign * n
    swing = abs(q * theta(T))
    if swing > MAX_SWING:
        raise MethodInfeasibleError(f"swing {swing:.3g} rad too large for direct quadrature")

    def f(t):
        v1, v2 = _velocity_terms(tab, t, coupling_mode)
        env = M[0, m - 1, n - 1] * v1 + M[1, m - 1, n - 1] * v2
        return env * np.exp(-1j * q * theta(t))

    limit = int(max(200, 4 * swing / (2 * np.pi) + 200))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        re = integrate.quad(lambda t: f(t).real, 0.0, T, epsabs=0.0, epsrel=rtol, limit=limit)[0]
        im = integrate.quad(lambda t: f(t).imag, 0.0, T, epsabs=0.0, epsrel=rtol, limit=limit)[0]
    return complex(re, im)


def nested_clock_mode(motion: CavityMotion, p_max: int,
                      couplings: CouplingMatrices | None = None,
                      coupling_mode: str = "instantaneous", rtol: float = 1e-11,
                      t_eval=None):
    """Barred (1,1) coefficients up to second order via the nested ODE.

    Returns a dict of arrays (alpha1, beta1, alpha2, beta2) at ``t_eval``
    (default: [T]).
    """
    P = p_max
    A, B = _couplings(motion, P, couplings)
    T = motion.duration
    swing = (P + 1) * motion.omega(1, 0.0) * T
    if swing > MAX_SWING:
        raise MethodInfeasibleError(f"swing {swing:.3g} rad too large for nested quadrature")
    w0 = motion.omega(1, 0.0)
    tab = _MotionTable(motion)
    p = np.arange(1, P + 1)

    def rhs(t, y):
        th = y[0]
        z = y[1:].view(complex)
        a_p1, b_p1 = z[:P], z[P:2 * P]
        v1, v2 = _velocity_terms(tab, t, coupling_mode)
        SA = A[0] * v1 + A[1] * v2
        SB = B[0] * v1 + B[1] * v2
        M1p = SA[0, :] * np.exp(-1j * (1 - p) * th)
        N1p = SB[0, :] * np.exp(-1j * (1 + p) * th)
        da = SA[:, 0] * np.exp(-1j * (p - 1) * th)
        db = SB[:, 0] * np.exp(-1j * (p + 1) * th)
        d_a2 = np.dot(M1p, a_p1) + np.dot(N1p, np.conj(b_p1))
        d_b2 = np.dot(M1p, b_p1) + np.dot(N1p, np.conj(a_p1))
        dz = np.concatenate([da, db, [d_a2, d_b2]])
        out = np.empty(1 + 2 * dz.size)
        out[0] = tab.omega1(t)
        out[1:] = dz.view(float)
        return out

    y0 = np.zeros(1 + 2 * (2 * P + 2))
    scale = max(np.max(np.abs(A)), np.max(np.abs(B)))
    vmax = max(np.max(np.abs(motion.sample(np.linspace(0, T, 65)).v2)),
               np.max(np.abs(motion.sample(np.linspace(0, T, 65)).v1)), 1e-300)
    atol = np.full(y0.size, 1e-3 * rtol * scale * vmax / w0)
    atol[0] = rtol * w0 * T
    atol[-4:] = 1e-3 * rtol * (scale * vmax / w0) ** 2 * w0 * T
    t_eval = np.array([T]) if t_eval is None else np.asarray(t_eval, dtype=float)
    sol = integrate.solve_ivp(rhs, (0.0, T), y0, method="DOP853", rtol=rtol, atol=atol,
                              t_eval=t_eval)
    if sol.status != 0:
        raise RuntimeError(sol.message)
    z = sol.y[1:].T.copy().view(complex)
    return {"t": sol.t, "alpha1": z[:, 0], "beta1": z[:, P],
            "alpha2": z[:, 2 * P], "beta2": z[:, 2 * P + 1]}
