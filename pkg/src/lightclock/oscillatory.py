"""Integrals of the form \\int g(t) exp(-i Theta(t)) dt with Theta' = omega > 0.

Four routes:

* ``direct``     adaptive Gauss-Kronrod on the raw integrand (small swings only)
* ``filon``      Legendre-moment Filon rule in the phase variable s = Theta
* ``levin``      Chebyshev collocation for the non-oscillatory antiderivative R,
                 R' - i omega R = g, so the integral is [R exp(-i Theta)]
* ``asymptotic`` integration-by-parts series for the same R, with the bound
                 \\int |r_K'| dt on the truncated remainder

``levin`` and ``asymptotic`` also work on batches of envelopes sampled at
Chebyshev nodes (see :func:`levin_antiderivative`), which is what the
Bogoliubov assembly uses.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy import integrate, special

from .chebyshev import ChebyshevGrid
from .errors import MethodInfeasibleError, RemainderTooLargeError

DIRECT_MAX_SWING = 1e6
METHODS = ("direct", "filon", "levin", "asymptotic")


@dataclass(frozen=True)
class OscillatoryIntegralSpec:
    envelope: Callable
    phase: Callable
    omega: Callable
    interval: tuple
    method: str = "filon"

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")

    @property
    def swing(self) -> float:
        a, b = self.interval
        return abs(float(self.phase(b)) - float(self.phase(a)))


class OscillatoryResult(NamedTuple):
    value: complex
    error: float


class Antiderivative(NamedTuple):
    """Nodal values of R with d/dt[R exp(-i q Theta)] = S exp(-i q Theta)."""

    R: np.ndarray
    error: float   # bound on |\\int residual| over the interval, per unit envelope


# ---------------------------------------------------------------------------
# batched antiderivatives on a Chebyshev grid

def levin_antiderivative(grid: ChebyshevGrid, omega_nodes: np.ndarray,
                         S: np.ndarray) -> Antiderivative:
    """Solve R' - i omega R = S by collocation; S has shape (n, ...)."""
    n = grid.n
    flat = S.reshape(n, -1).astype(complex)
    op = grid.diff_matrix - 1j * np.diag(omega_nodes)
    R = np.linalg.solve(op, flat)
    # residual on an interleaved point set, as a relative integral bound
    tm = 0.5 * (grid.nodes[1:] + grid.nodes[:-1])
    W = grid.interpolation_matrix(tm)
    Rp = grid.diff_matrix @ R
    om = W @ omega_nodes
    res = W @ Rp - 1j * om[:, None] * (W @ R) - W @ flat
    scale = np.max(np.abs(flat)) if flat.size else 0.0
    err = float(np.max(np.sum(np.abs(res), axis=0)) * (grid.b - grid.a) / len(tm))
    err = err / scale if scale > 0 else 0.0
    return Antiderivative(R.reshape(S.shape), err)


def asymptotic_antiderivative(grid: ChebyshevGrid, omega_nodes: np.ndarray,
                              S: np.ndarray, tol: float = 1e-15,
                              max_terms: int = 12) -> Antiderivative:
    """R = sum_k r_k, r_0 = i S / omega, r_k = -i r_{k-1}' / omega."""
    n = grid.n
    flat = S.reshape(n, -1).astype(complex)
    scale = np.max(np.abs(flat)) if flat.size else 0.0
    if scale == 0.0:
        return Antiderivative(np.zeros(S.shape, complex), 0.0)
    inv = (1.0 / omega_nodes)[:, None]
    r = 1j * flat * inv
    R = r.copy()
    prev = np.inf
    for _ in range(max_terms):
        dr = grid.derivative(r)
        bound = float(np.max(np.abs(grid.integral(np.abs(dr)))))
        if bound <= tol * scale * (grid.b - grid.a):
            return Antiderivative(R.reshape(S.shape), bound / scale)
        if bound > prev:
            break
        prev = bound
        r = -1j * dr * inv
        R = R + r
    raise RemainderTooLargeError(
        f"asymptotic series stalled with remainder {prev / scale:.3e}; "
        "phase swing too small for this method")


def antiderivative(grid: ChebyshevGrid, q: float, omega1_nodes: np.ndarray,
                   S: np.ndarray, method: str = "levin") -> Antiderivative:
    """Antiderivative for the kernel exp(-i q Theta_1); q = 0 gives a plain running integral."""
    if q == 0:
        return Antiderivative(grid.cumulative_integral(S.astype(complex)),
                              grid.tail(S) / max(np.max(np.abs(S)), 1e-300)
                              if np.any(S) else 0.0)
    om = q * omega1_nodes
    if method == "asymptotic":
        return asymptotic_antiderivative(grid, om, S)
    if method in ("levin", "filon"):
        return levin_antiderivative(grid, om, S)
    raise ValueError(f"unsupported antiderivative method {method!r}")


# ---------------------------------------------------------------------------
# single definite integrals

def oscillatory_integral(spec: OscillatoryIntegralSpec, tol: float = 1e-12,
                         nodes: int = 64) -> OscillatoryResult:
    a, b = map(float, spec.interval)
    method = spec.method
    swing = spec.swing
    if swing == 0.0:
        val, err = _real_quad(lambda t: spec.envelope(t), a, b, tol, limit=200)
        return OscillatoryResult(val * np.exp(-1j * float(spec.phase(a))), err)
    if method == "direct":
        if swing > DIRECT_MAX_SWING:
            raise MethodInfeasibleError(
                f"direct quadrature over {swing:.3g} rad exceeds {DIRECT_MAX_SWING:.0e}")
        limit = int(max(200, 4 * swing / (2 * np.pi) + 100))
        f = lambda t: spec.envelope(t) * np.exp(-1j * spec.phase(t))
        val, err = _real_quad(f, a, b, tol, limit=limit)
        return OscillatoryResult(val, err)
    if method == "filon":
        return _filon(spec, tol)
    grid = ChebyshevGrid(a, b, nodes)
    g = np.asarray(spec.envelope(grid.nodes), dtype=complex)
    om = np.asarray(spec.omega(grid.nodes), dtype=float)
    if method == "levin":
        R, e = levin_antiderivative(grid, om, g)
    else:
        R, e = asymptotic_antiderivative(grid, om, g)
    pa, pb = float(spec.phase(a)), float(spec.phase(b))
    val = R[-1] * np.exp(-1j * pb) - R[0] * np.exp(-1j * pa)
    scale = float(np.max(np.abs(g)))
    return OscillatoryResult(complex(val), e * scale + grid.tail(g) * (b - a))


def _real_quad(f, a, b, tol, limit):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return _real_quad_raw(f, a, b, tol, limit)


def _real_quad_raw(f, a, b, tol, limit):
    re, e1 = integrate.quad(lambda t: np.real(f(t)), a, b, epsabs=0.0, epsrel=tol,
                            limit=limit)
    im, e2 = integrate.quad(lambda t: np.imag(f(t)), a, b, epsabs=0.0, epsrel=tol,
                            limit=limit)
    return complex(re, im), float(np.hypot(e1, e2))


def _invert_phase(spec, s, t_lo, t_hi):
    # Newton on Theta(t) = s from the linear guess; Theta is monotone
    pa, pb = spec.phase(t_lo), spec.phase(t_hi)
    t = t_lo + (s - pa) / (pb - pa) * (t_hi - t_lo)
    for _ in range(30):
        dt = (spec.phase(t) - s) / spec.omega(t)
        t = np.clip(t - dt, t_lo, t_hi)
        if np.max(np.abs(dt)) <= 1e-15 * max(abs(t_hi), abs(t_lo), 1e-300):
            break
    return t


def _filon_panels(spec, panels, order):
    a, b = map(float, spec.interval)
    x, w = np.polynomial.legendre.leggauss(order)
    P = np.array([special.eval_legendre(k, x) for k in range(order)])   # (k, i)
    edges = np.linspace(a, b, panels + 1)
    sa = np.asarray(spec.phase(edges), dtype=float)
    total = 0j
    k = np.arange(order)
    for i in range(panels):
        s0, s1 = sa[i], sa[i + 1]
        half, mid = 0.5 * (s1 - s0), 0.5 * (s1 + s0)
        s_nodes = mid + half * x
        t_nodes = _invert_phase(spec, s_nodes, edges[i], edges[i + 1])
        h = spec.envelope(t_nodes) / spec.omega(t_nodes)   # envelope per unit phase
        c = (2 * k + 1) / 2.0 * (P @ (w * h))
        kappa = abs(half)
        mom = 2.0 * (-1j) ** k * special.spherical_jn(k, kappa)
        if half < 0:
            mom = np.conj(mom)
        total += half * np.exp(-1j * mid) * np.dot(c, mom)
    return total


def _filon(spec, tol, order: int = 12, max_panels: int = 1 << 14):
    panels = 4
    prev = _filon_panels(spec, panels, order)
    while panels < max_panels:
        panels *= 2
        cur = _filon_panels(spec, panels, order)
        err = abs(cur - prev)
        if err <= tol * max(abs(cur), 1e-300):
            return OscillatoryResult(complex(cur), float(err))
        prev = cur
    return OscillatoryResult(complex(prev), float(err))
