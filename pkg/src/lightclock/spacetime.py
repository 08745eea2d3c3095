"""Schwarzschild geometry in SI units.

All lengths are in metres, times in seconds. The speed of light is kept
explicit; only dimensionless ratios are formed from it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import ConvergenceError, DomainError

SPEED_OF_LIGHT = 299_792_458.0
GRAVITATIONAL_CONSTANT = 6.67430e-11
EARTH_MASS = 5.9722e24
EARTH_RADIUS = 6.367e6


@dataclass(frozen=True)
class SchwarzschildGeometry:
    """Exterior Schwarzschild metric ``ds^2 = -f dt^2 + dr^2 / f``."""

    r_s: float
    c: float = SPEED_OF_LIGHT

    def __post_init__(self):
        if not (self.r_s >= 0.0 and math.isfinite(self.r_s)):
            raise DomainError(f"r_s must be finite and non-negative, got {self.r_s}")
        if not self.c > 0.0:
            raise DomainError(f"c must be positive, got {self.c}")

    @classmethod
    def from_mass(cls, mass: float, G: float = GRAVITATIONAL_CONSTANT,
                  c: float = SPEED_OF_LIGHT) -> "SchwarzschildGeometry":
        return cls(r_s=2.0 * G * mass / c**2, c=c)

    @classmethod
    def earth(cls) -> "SchwarzschildGeometry":
        return cls.from_mass(EARTH_MASS)

    @property
    def mass(self) -> float:
        """Mass in kg implied by ``r_s`` (with the CODATA value of G)."""
        return self.r_s * self.c**2 / (2.0 * GRAVITATIONAL_CONSTANT)

    def _check(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r <= self.r_s):
            raise DomainError("radius must lie outside the horizon (r > r_s)")
        return r


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def lapse(geom: SchwarzschildGeometry, r):
    """f(r) = 1 - r_s / r."""
    r = geom._check(r)
    return _out(1.0 - geom.r_s / r)


def tortoise(geom: SchwarzschildGeometry, r):
    """Tortoise coordinate x = r + r_s ln(r / r_s - 1)."""
    r = geom._check(r)
    if geom.r_s == 0.0:
        return _out(r.copy())
    return _out(r + geom.r_s * np.log(r / geom.r_s - 1.0))


def tortoise_difference(geom: SchwarzschildGeometry, r, dr):
    """x(r + dr) - x(r) without cancellation, for any |dr| small or large."""
    r = geom._check(r)
    dr = np.asarray(dr, dtype=float)
    if geom.r_s == 0.0:
        return _out(dr + 0.0 * r)
    return _out(dr + geom.r_s * np.log1p(dr / (r - geom.r_s)))


def radius_from_tortoise(geom: SchwarzschildGeometry, x: float, tol: float = 1e-9,
                         max_iter: int = 60) -> float:
    """Invert the tortoise map: Newton iteration seeded at r = x, bisection fallback.

    The residual target is ``max(tol, 4 ulp(x))``; below that the tortoise value
    itself is not representable.
    """
    x = float(x)
    rs = geom.r_s
    if rs == 0.0:
        if x <= 0.0:
            raise DomainError("x must be positive in flat space")
        return x
    target = max(tol, 4.0 * math.ulp(x))

    def resid(r):
        return r + rs * math.log(r / rs - 1.0) - x

    r = x if x > 2.0 * rs else rs * (1.0 + math.exp((x - rs) / rs))
    r = max(r, math.nextafter(rs, math.inf))
    for _ in range(max_iter):
        g = resid(r)
        if abs(g) <= target:
            return r
        r_new = r - g * (1.0 - rs / r)
        if not r_new > rs:
            r_new = 0.5 * (r + rs)
        if r_new == r:
            break
        r = r_new
    lo = math.nextafter(rs, math.inf)
    hi = max(abs(x), rs) * 2.0 + 10.0 * rs + 1.0
    try:
        r = brentq(resid, lo, hi, xtol=1e-300, rtol=4.5e-16, maxiter=1000)
    except ValueError as exc:
        raise ConvergenceError(f"tortoise inversion failed for x={x}") from exc
    if abs(resid(r)) > target:
        raise ConvergenceError(
            f"tortoise inversion residual {resid(r):.3e} exceeds {target:.3e}")
    return r


def static_proper_acceleration(geom: SchwarzschildGeometry, r):
    """Proper acceleration of a static observer, c^2 r_s / (2 sqrt(f) r^2)."""
    f = np.asarray(lapse(geom, r))
    r = np.asarray(r, dtype=float)
    return _out(geom.c**2 * geom.r_s / (2.0 * np.sqrt(f) * r**2))


def tidal_acceleration(geom: SchwarzschildGeometry, r, L):
    """Leading-order differential free-fall acceleration across a radial length L."""
    r = geom._check(r)
    if np.any(np.asarray(L) <= 0):
        raise DomainError("L must be positive")
    return _out(geom.c**2 * geom.r_s * np.asarray(L, dtype=float) / r**3)


def static_proper_time(geom: SchwarzschildGeometry, r, T):
    """Proper time sqrt(f(r)) T of an observer held at fixed r."""
    if np.any(np.asarray(T) < 0):
        raise DomainError("T must be non-negative")
    return _out(np.sqrt(np.asarray(lapse(geom, r))) * np.asarray(T, dtype=float))
