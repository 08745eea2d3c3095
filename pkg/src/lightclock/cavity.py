"""Instantaneous Dirichlet modes, accrued phases and boundary couplings.

Field modes on [x1, x2] (tortoise coordinate, time measured as c t):

    phi_m = N_m sin(k_m (x - x1)) exp(-i k_m c t),   k_m = m pi / L,
    N_m = 1 / sqrt(m pi)

normalised to (phi_m, phi_n) = delta_mn under the Klein-Gordon product
(u, v) = -i \\int (u dv*/d(ct) - v* du/d(ct)) dx.  The derivative of a mode
with respect to a mirror position x_j acts on its Cauchy data (profile and
frequency), which keeps A^j antihermitian.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import compensated as cp
from .chebyshev import ChebyshevGrid
from .errors import DomainError
from .motion import CavityMotion


@dataclass(frozen=True)
class ModeBasis:
    x1: float
    x2: float
    n_max: int = 20

    def __post_init__(self):
        if not self.x2 > self.x1:
            raise DomainError("need x1 < x2")
        if self.n_max < 1:
            raise DomainError("n_max must be >= 1")

    @property
    def length(self) -> float:
        return self.x2 - self.x1

    def wavenumber(self, m):
        return np.asarray(m) * np.pi / self.length


@dataclass(frozen=True)
class ModeFunction:
    """Cauchy data at t = 0: field value and its derivative w.r.t. c t."""

    value: Callable
    dt: Callable


def mode_function(basis: ModeBasis, m: int, conjugate: bool = False) -> ModeFunction:
    x1, L = basis.x1, basis.length
    k = m * np.pi / L
    norm = 1.0 / np.sqrt(m * np.pi)
    sign = 1.0 if conjugate else -1.0
    value = lambda x: norm * np.sin(k * (np.asarray(x) - x1)) + 0j
    return ModeFunction(value, lambda x: sign * 1j * k * value(x))


def mode_derivative(basis: ModeBasis, m: int, j: int) -> ModeFunction:
    """Analytic d(phi_m)/d(x_j), j = 1 (bottom) or 2 (top)."""
    x1, L = basis.x1, basis.length
    k = m * np.pi / L
    norm = 1.0 / np.sqrt(m * np.pi)
    if j == 2:
        dk = -k / L
        dphase = lambda u: -m * np.pi * u / L
    elif j == 1:
        dk = k / L
        dphase = lambda u: m * np.pi * (u - 1.0) / L
    else:
        raise ValueError("j must be 1 or 2")

    def f(x):
        return norm * np.sin(k * (np.asarray(x) - x1))

    def df(x):
        u = (np.asarray(x) - x1) / L
        return norm * np.cos(m * np.pi * u) * dphase(u)

    return ModeFunction(lambda x: df(x) + 0j,
                        lambda x: -1j * (dk * f(x) + k * df(x)))


def kg_inner_product(u: ModeFunction, v: ModeFunction, basis: ModeBasis,
                     points: int = 400) -> complex:
    """Klein-Gordon product of two solutions by Gauss-Legendre quadrature."""
    s, w = np.polynomial.legendre.leggauss(points)
    half = 0.5 * basis.length
    x = basis.x1 + half * (s + 1.0)
    integrand = u.value(x) * np.conj(v.dt(x)) - np.conj(v.value(x)) * u.dt(x)
    return complex(-1j * half * np.sum(w * integrand))


@dataclass(frozen=True)
class CouplingMatrices:
    """A[j-1, m-1, n-1] = (d phi_m / d x_j, phi_n) and B[j-1, m-1, n-1] = -(d phi_m / d x_j, phi_n^*).

    The sign on B comes from the negative norm of the conjugate modes.
    """

    A: np.ndarray
    B: np.ndarray
    L: float

    @property
    def n_max(self) -> int:
        return self.A.shape[-1]

    def at_length(self, L: float) -> "CouplingMatrices":
        s = self.L / L
        return CouplingMatrices(self.A * s, self.B * s, L)


def _sin_moment(k):
    # \int_0^1 sin(k pi u) du for integer k (odd in k)
    k = np.asarray(k)
    safe = np.where(k == 0, 1, k)
    return np.where(k == 0, 0.0, (1.0 - (-1.0) ** np.abs(k)) / (safe * np.pi))


def _u_sin_moment(k):
    # \int_0^1 u sin(k pi u) du for integer k (odd in k)
    k = np.asarray(k)
    safe = np.where(k == 0, 1, k)
    return np.where(k == 0, 0.0, -((-1.0) ** np.abs(k)) / (safe * np.pi))


def coupling_matrices(basis: ModeBasis, n_max: int | None = None) -> CouplingMatrices:
    """Closed-form boundary couplings A^j, B^j for j = 1, 2."""
    N = basis.n_max if n_max is None else n_max
    L = basis.length
    m = np.arange(1, N + 1)[:, None].astype(float)
    n = np.arange(1, N + 1)[None, :].astype(float)
    mi = m.astype(int)
    ni = n.astype(int)
    I = 0.5 * (_u_sin_moment(ni + mi) + _u_sin_moment(ni - mi))
    J = 0.5 * (_sin_moment(ni + mi) + _sin_moment(ni - mi))
    norm = 1.0 / np.sqrt(m * n) / np.pi
    # \int d_j f_m f_n dx (dimensionless)
    G2 = -norm * m * np.pi * I
    G1 = norm * m * np.pi * (I - J)
    km, kn = m * np.pi / L, n * np.pi / L
    overlap = np.where(mi == ni, L / (2.0 * m * np.pi), 0.0)   # \int f_m f_n dx
    dk = {1: km / L, 2: -km / L}
    G = {1: G1, 2: G2}
    A = np.stack([(km + kn) * G[j] + dk[j] * overlap for j in (1, 2)])
    B = np.stack([-((km - kn) * G[j] + dk[j] * overlap) for j in (1, 2)])
    return CouplingMatrices(A=A, B=B.astype(float), L=L)


def mode_frequency(motion: CavityMotion, m: int, t):
    """omega_m(t) = c m pi / (x2(t) - x1(t))."""
    if m < 1:
        raise DomainError("mode index starts at 1")
    return motion.omega(m, t)


class AccumulatedPhase:
    """Theta_m(t) = \\int_0^t omega_m, kept as omega_m(0) t + drift(t).

    ``omega_1(0) t`` is formed in double-double arithmetic and the drift
    \\int (omega_1 - omega_1(0)) by spectral quadrature of the relative
    length change, so phases reduced modulo 2 pi stay accurate at 1e10 rad.
    """

    def __init__(self, motion: CavityMotion, nodes: int = 64):
        self.motion = motion
        self.T = motion.duration
        self.grid = ChebyshevGrid(0.0, self.T, nodes)
        wh, wl = cp.dd_mul_d(cp.PI_HI, cp.PI_LO, motion.c)
        self._w0 = cp.dd_div_d(wh, wl, motion.length0)
        self.omega0 = self._w0[0] + self._w0[1]
        s = motion.sample(self.grid.nodes)
        self.omega_nodes = motion.c * np.pi / (motion.length0 + s.stretch)
        rel = -s.stretch / (motion.length0 + s.stretch)       # omega_1/omega_1(0) - 1
        self._rel = rel
        self._drift_nodes = self.omega0 * self.grid.cumulative_integral(rel)
        self.error_estimate = abs(self.omega0) * self.T * self.grid.tail(rel)

    def relative_drift(self, t):
        """omega_1(t) / omega_1(0) - 1."""
        return self.grid.evaluate(self._rel, t)

    def drift(self, t):
        """\\int_0^t (omega_1 - omega_1(0)) dt'."""
        return self.grid.evaluate(self._drift_nodes, t)

    def __call__(self, t, m: int = 1):
        t = np.asarray(t, dtype=float)
        return m * (self.omega0 * t + self.drift(t))

    def reduced(self, t, m: int = 1):
        """(whole turns, residual in [0, 2 pi)) of Theta_m(t)."""
        t = np.asarray(t, dtype=float)
        h, l = cp.dd_mul_d(self._w0[0], self._w0[1], t)
        h, l = cp.dd_mul_d(h, l, float(m))
        h, l = cp.dd_add(h, l, m * self.drift(t), 0.0)
        return cp.reduce_two_pi(h, l)

    def factor(self, q: int, t):
        """exp(-i q Theta_1(t)) from the reduced phase."""
        if q == 0:
            return np.ones_like(np.asarray(t, dtype=float)) + 0j
        _, r = self.reduced(t, 1)
        k, rq = cp.reduce_two_pi(*cp.two_prod(r, float(q)))
        return np.exp(-1j * rq)


def accumulated_phase(motion: CavityMotion, m: int, t, nodes: int = 64):
    return AccumulatedPhase(motion, nodes)(t, m)
