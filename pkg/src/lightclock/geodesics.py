"""Radial free fall from rest ("drip" geodesics) and the falling mirror pair.

The fall is integrated in coordinate time with the fall distance written as
u = r0 - r = w**2.  In terms of w the equations are regular at release:

    dw/dt = (1/2) f(r) sqrt(r_s / (r r0 f(r0)))

The proper-time deficit d(t) = tau / sqrt(f(r0)) - t is carried as its own
state so that tiny fractional differences are never formed by subtraction.
For the mirror pair the separation of the two w's is integrated directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline

from .errors import DomainError, IntegrationError
from .motion import CavityMotion, MotionSample
from .spacetime import SchwarzschildGeometry, lapse, tortoise, tortoise_difference

RTOL = 1e-12
DEFAULT_SAMPLES = 20_000


@dataclass(frozen=True)
class AtRadius:
    r_end: float


@dataclass(frozen=True)
class AtTime:
    t_end: float


def _rate(rs, r, r0, c):
    # dw/dt = (c/2) sqrt(rs) (r - rs) / (r^1.5 sqrt(r0 - rs))
    return 0.5 * c * math.sqrt(rs) * (r - rs) / (r**1.5 * np.sqrt(r0 - rs))


def _deficit_rate(rs, w, r, r0):
    return -rs * w * w / (r * (r0 - rs))


def _newtonian_time(geom, r0, drop):
    g = geom.c**2 * geom.r_s / (2.0 * r0**2)
    return math.sqrt(2.0 * drop / g)


@dataclass(frozen=True, eq=False)
class DripGeodesic:
    """Sampled radial free fall from rest at r0."""

    r0: float
    t: np.ndarray
    tau: np.ndarray
    r: np.ndarray
    x: np.ndarray
    dxdt: np.ndarray
    geom: SchwarzschildGeometry = field(repr=False)
    _w_spline: CubicSpline = field(repr=False)

    @property
    def duration(self) -> float:
        return float(self.t[-1])

    def interpolate(self, t):
        """(r, dx/dt) at arbitrary t from the C^2 spline of w = sqrt(r0 - r)."""
        w = self._w_spline(t)
        r = self.r0 - w * w
        rs = self.geom.r_s
        if rs == 0.0:
            return r, np.zeros_like(np.asarray(r))
        wdot = _rate(rs, r, self.r0, self.geom.c)
        return r, -2.0 * w * wdot * r / (r - rs)

    def energy_residual(self) -> float:
        """max |f(r) dt/dtau - sqrt(f(r0))| over the samples."""
        rs = self.geom.r_s
        f0 = 1.0 - rs / self.r0
        w2 = self.r0 - self.r
        dd = _deficit_rate(rs, np.sqrt(w2), self.r, self.r0) if rs else 0.0 * self.r
        dtau_dt = math.sqrt(f0) * (1.0 + dd)
        f = 1.0 - rs / self.r
        return float(np.max(np.abs(f / dtau_dt - math.sqrt(f0))))


def _check_start(geom, r0):
    if not r0 > geom.r_s:
        raise DomainError("release radius must satisfy r0 > r_s")


def _solve(fun, t_end, y0, atol, events=None):
    sol = solve_ivp(fun, (0.0, t_end), y0, method="DOP853", rtol=RTOL, atol=atol,
                    dense_output=True, events=events)
    if sol.status == -1:
        raise IntegrationError(f"geodesic integration failed: {sol.message}")
    return sol


def _stop_time(geom, r0, stop, fun, y0, atol, w_index=0):
    """Coordinate time at which the stop condition is met."""
    if isinstance(stop, AtTime):
        if stop.t_end < 0:
            raise DomainError("t_end must be non-negative")
        return float(stop.t_end)
    r_end = float(stop.r_end)
    if not (geom.r_s < r_end <= r0):
        raise DomainError("need r_s < r_end <= r0")
    if r_end == r0:
        return 0.0
    if geom.r_s == 0.0:
        raise DomainError("without gravity the mirror never leaves r0")
    if r_end < 1.5 * geom.r_s:
        raise DomainError("trajectories approaching the horizon are not modelled")
    w_end = math.sqrt(r0 - r_end)

    def hit(t, y):
        return y[w_index] - w_end
    hit.terminal = True
    hit.direction = 1.0
    t_guess = _newtonian_time(geom, r0, r0 - r_end)
    for factor in (4.0, 64.0, 4096.0):
        sol = _solve(fun, factor * t_guess, y0, atol, events=hit)
        if sol.t_events[0].size:
            return float(sol.t_events[0][0])
    raise IntegrationError("stop radius not reached")


def _single_rhs(geom, r0):
    rs = geom.r_s

    def fun(t, y):
        w = y[0]
        r = r0 - w * w
        if r <= rs:
            raise DomainError("horizon reached")
        return [_rate(rs, r, r0, geom.c), _deficit_rate(rs, w, r, r0)]
    return fun


def _atol_single(geom, r0, t_scale):
    rs = geom.r_s
    if rs == 0.0:
        return [1e-300, 1e-300]
    w_scale = _rate(rs, r0, r0, geom.c) * t_scale
    g = geom.c**2 * rs / (2.0 * r0**2)
    d_scale = (g / geom.c) ** 2 * t_scale**3 / 3.0
    return [RTOL * 1e-2 * w_scale, RTOL * 1e-2 * max(d_scale, 1e-300)]


def integrate_drip(geom: SchwarzschildGeometry, r0: float, stop,
                   samples: int = DEFAULT_SAMPLES) -> DripGeodesic:
    """Integrate a drip geodesic released at r0 until ``stop``.

    ``stop`` is :class:`AtRadius` or :class:`AtTime`.
    """
    _check_start(geom, r0)
    fun = _single_rhs(geom, r0)
    if isinstance(stop, AtTime):
        t_scale = max(stop.t_end, 1e-300)
    else:
        t_scale = (_newtonian_time(geom, r0, r0 - stop.r_end)
                   if geom.r_s > 0 and stop.r_end < r0 else 1.0)
    atol = _atol_single(geom, r0, t_scale)
    T = _stop_time(geom, r0, stop, fun, [0.0, 0.0], atol)
    t = np.linspace(0.0, T, samples)
    if T == 0.0 or geom.r_s == 0.0:
        w = np.zeros_like(t)
        d = np.zeros_like(t)
    else:
        sol = _solve(fun, T, [0.0, 0.0], atol)
        w, d = sol.sol(t)
        w[0] = d[0] = 0.0
    return _make_drip(geom, r0, t, w, d)


def _make_drip(geom, r0, t, w, d):
    rs = geom.r_s
    r = r0 - w * w
    tau = math.sqrt(1.0 - rs / r0) * (t + d)
    if rs == 0.0:
        dxdt = np.zeros_like(t)
    else:
        dxdt = -2.0 * w * _rate(rs, r, r0, geom.c) * r / (r - rs)
    spline = CubicSpline(t, w) if t[-1] > t[0] else _ConstSpline(w[0])
    return DripGeodesic(r0=float(r0), t=t, tau=tau, r=r, x=np.asarray(tortoise(geom, r)),
                        dxdt=dxdt, geom=geom, _w_spline=spline)


class _ConstSpline:
    def __init__(self, value):
        self.value = float(value)

    def __call__(self, t):
        return self.value + 0.0 * np.asarray(t, dtype=float)


def fall_coordinate_time(geom: SchwarzschildGeometry, r0: float, r_end: float) -> float:
    """Coordinate time for a drip geodesic from r0 to reach r_end."""
    _check_start(geom, r0)
    if not geom.r_s < r_end < r0:
        raise DomainError("need r_s < r_end < r0")
    fun = _single_rhs(geom, r0)
    t_scale = _newtonian_time(geom, r0, r0 - r_end) if geom.r_s > 0 else 1.0
    return _stop_time(geom, r0, AtRadius(r_end), fun, [0.0, 0.0],
                      _atol_single(geom, r0, t_scale))


class CavityTrajectory(CavityMotion):
    """Both mirrors of the falling clock, integrated as a coupled system.

    State: (w1, w2 - w1, d1, d2).  The separation and tortoise length are
    reconstructed with log1p/expm1 forms so they keep full relative precision
    for any L0.
    """

    def __init__(self, geom: SchwarzschildGeometry, r_A: float, L0: float, T: float,
                 samples: int = DEFAULT_SAMPLES):
        _check_start(geom, r_A)
        if not L0 > 0:
            raise DomainError("L0 must be positive")
        if not T > 0:
            raise DomainError("T must be positive")
        self.geom = geom
        self.c = geom.c
        self.r_A = float(r_A)
        self.L0 = float(L0)
        self.duration = self.T = float(T)
        self.length0 = float(tortoise_difference(geom, r_A, L0))
        rs = geom.r_s
        if rs == 0.0:
            self._sol = None
        else:
            atol1 = _atol_single(geom, r_A, T)
            y0 = np.zeros(4)
            rate0 = _rate(rs, r_A, r_A, geom.c)
            dw_scale = abs(rate0 * self._dlnh(0.0, 0.0, self.L0)) * T
            atol = [atol1[0], RTOL * 1e-2 * max(dw_scale, 1e-300), atol1[1], atol1[1]]
            self._sol = _solve(self._rhs, T, y0, atol)
        t = np.linspace(0.0, T, samples)
        y = self._state(t)
        self.bottom = _make_drip(geom, r_A, t, y[0], y[2])
        self.top = _make_drip(geom, r_A + L0, t, y[0] + y[1], y[3])
        self.t = t

    # ODE ------------------------------------------------------------------
    def _dlnh(self, w1, dw, dr_extra):
        rs, r0 = self.geom.r_s, self.r_A
        r1 = r0 - w1 * w1
        dr = self.L0 - dw * (2.0 * w1 + dw)
        return (np.log1p(dr / (r1 - rs)) - 1.5 * np.log1p(dr / r1)
                - 0.5 * np.log1p(self.L0 / (r0 - rs)))

    def _rhs(self, t, y):
        rs, r0 = self.geom.r_s, self.r_A
        w1, dw = y[0], y[1]
        w2 = w1 + dw
        r1 = r0 - w1 * w1
        r2 = r0 + self.L0 - w2 * w2
        if r1 <= rs:
            raise DomainError("horizon reached")
        h1 = _rate(rs, r1, r0, self.c)
        return [h1, h1 * np.expm1(self._dlnh(w1, dw, 0.0)),
                _deficit_rate(rs, w1, r1, r0),
                _deficit_rate(rs, w2, r2, r0 + self.L0)]

    def _state(self, t):
        t = np.asarray(t, dtype=float)
        if self._sol is None:
            return np.zeros((4,) + t.shape)
        y = self._sol.sol(t)
        y[:, t == 0.0] = 0.0
        return y

    # CavityMotion -----------------------------------------------------------
    def sample(self, t) -> MotionSample:
        t = np.asarray(t, dtype=float)
        rs, r0 = self.geom.r_s, self.r_A
        if rs == 0.0:
            z = np.zeros_like(t)
            return MotionSample(z, z.copy(), z.copy(), z.copy())
        w1, dw, _, _ = self._state(t)
        w2 = w1 + dw
        r1 = r0 - w1 * w1
        dr = self.L0 - dw * (2.0 * w1 + dw)
        h1 = _rate(rs, r1, r0, self.c)
        v1 = -2.0 * w1 * h1 * r1 / (r1 - rs)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(w1 > 0, dw / np.where(w1 > 0, w1, 1.0), 0.0)
        dln = (np.log1p(ratio) + self._dlnh(w1, dw, 0.0)
               + np.log1p(dr / r1) - np.log1p(dr / (r1 - rs)))
        dv = v1 * np.expm1(dln)
        stretch = (-dw * (2.0 * w1 + dw)
                   + rs * (np.log1p(dr / (r1 - rs)) - np.log1p(self.L0 / (r0 - rs))))
        return MotionSample(v1, v1 + dv, dv, stretch)

    def positions(self, t):
        """(r1, r2, x1, x2) at coordinate time t."""
        t = np.asarray(t, dtype=float)
        w1, dw, _, _ = self._state(t)
        r1 = self.r_A - w1 * w1
        r2 = r1 + (self.L0 - dw * (2.0 * w1 + dw))
        x1 = tortoise(self.geom, r1)
        x2 = x1 + self.length0 + self.sample(t).stretch
        return r1, r2, x1, x2

    def proper_time_deficit(self, t):
        """d1(t) = tau_B / sqrt(f(r_A)) - t for the bottom mirror."""
        return self._state(t)[2]
    
    @property
    def x1(self):
        return self.bottom.x

    @property
    def x2(self):
        return self.bottom.x + self.length0 + self.sample(self.t).stretch


def mirror_pair(geom: SchwarzschildGeometry, r_A: float, L0: float, T: float,
                samples: int = DEFAULT_SAMPLES) -> CavityTrajectory:
    return CavityTrajectory(geom, r_A, L0, T, samples=samples)


def fractional_proper_time(geom: SchwarzschildGeometry, r_A: float, T, ) -> np.ndarray | float:
    """(tau_B - tau_A) / tau_A for the bottom-mirror observer after coordinate time T.

    Accepts an array of times (sampled along one fall); T = 0 maps to 0.
    """
    T_arr = np.atleast_1d(np.asarray(T, dtype=float))
    if np.any(T_arr < 0):
        raise DomainError("T must be non-negative")
    _check_start(geom, r_A)
    t_max = float(T_arr.max())
    if geom.r_s == 0.0 or t_max == 0.0:
        out = np.zeros_like(T_arr)
    else:
        fun = _single_rhs(geom, r_A)
        sol = _solve(fun, t_max, [0.0, 0.0], _atol_single(geom, r_A, t_max))
        d = sol.sol(T_arr)[1]
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.where(T_arr > 0, d / np.where(T_arr > 0, T_arr, 1.0), 0.0)
    return float(out[0]) if np.ndim(T) == 0 else out
