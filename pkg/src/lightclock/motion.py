"""Mirror-motion interface consumed by the cavity and Bogoliubov modules.

Positions live in the conformally flat (tortoise) coordinate. Velocity
differences and the length change are provided directly rather than as
differences of large numbers: a 1 m cavity at r ~ 6e6 m would otherwise
lose most of its significant digits.
"""

from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np

from .spacetime import SPEED_OF_LIGHT


class MotionSample(NamedTuple):
    v1: np.ndarray        # dx1/dt, bottom mirror
    v2: np.ndarray        # dx2/dt, top mirror
    dlength: np.ndarray   # d(x2 - x1)/dt
    stretch: np.ndarray   # (x2 - x1)(t) - (x2 - x1)(0)


class CavityMotion:
    """Base class: subclasses define ``duration``, ``length0``, ``c`` and ``sample``."""

    duration: float
    length0: float
    c: float = SPEED_OF_LIGHT

    def sample(self, t) -> MotionSample:  # pragma: no cover - interface
        raise NotImplementedError

    def length(self, t):
        return self.length0 + self.sample(t).stretch

    def omega(self, m: int, t):
        """Instantaneous angular frequency of mode m, c m pi / (x2 - x1)."""
        return self.c * m * np.pi / self.length(t)

    def scaled(self, eps: float) -> "ScaledMotion":
        return ScaledMotion(self, eps)


class PrescribedMotion(CavityMotion):
    """Analytic mirror motion, used for toy-regime oracles.

    ``v1``, ``v2`` and ``stretch`` are vectorised callables of t.
    """

    def __init__(self, duration: float, length0: float,
                 v1: Callable, v2: Callable, stretch: Callable,
                 c: float = SPEED_OF_LIGHT):
        self.duration = float(duration)
        self.length0 = float(length0)
        self.c = float(c)
        self._v1, self._v2, self._stretch = v1, v2, stretch

    def sample(self, t) -> MotionSample:
        t = np.asarray(t, dtype=float)
        v1 = np.broadcast_to(np.asarray(self._v1(t), dtype=float), t.shape).copy()
        v2 = np.broadcast_to(np.asarray(self._v2(t), dtype=float), t.shape).copy()
        return MotionSample(v1, v2, v2 - v1,
                            np.broadcast_to(self._stretch(t), t.shape).astype(float))

    @classmethod
    def uniform(cls, duration, length0, v_bottom=0.0, v_top=0.0, c=SPEED_OF_LIGHT):
        """Mirrors moving at constant velocities from t = 0."""
        dv = v_top - v_bottom
        return cls(duration, length0,
                   lambda t: v_bottom + 0.0 * t, lambda t: v_top + 0.0 * t,
                   lambda t: dv * t, c=c)

    @classmethod
    def smooth_ramp(cls, duration, length0, v_bottom, v_top, c=SPEED_OF_LIGHT):
        """Velocities v_j sin^2(pi t / 2T): start at rest, end at v_j."""
        T = float(duration)
        shape = lambda t: np.sin(0.5 * np.pi * t / T) ** 2
        integ = lambda t: 0.5 * t - T / (2.0 * np.pi) * np.sin(np.pi * t / T)
        dv = v_top - v_bottom
        return cls(duration, length0,
                   lambda t: v_bottom * shape(t), lambda t: v_top * shape(t),
                   lambda t: dv * integ(t), c=c)

    @classmethod
    def static(cls, duration, length0, c=SPEED_OF_LIGHT):
        return cls.uniform(duration, length0, 0.0, 0.0, c=c)


class ScaledMotion(CavityMotion):
    """Same geometry (lengths, frequencies) with mirror velocities multiplied by eps.

    Only the velocity factors entering the coupling integrands are scaled;
    this isolates the order-by-order velocity structure.
    """

    def __init__(self, base: CavityMotion, eps: float):
        self.base = base
        self.eps = float(eps)
        self.duration = base.duration
        self.length0 = base.length0
        self.c = base.c

    def sample(self, t) -> MotionSample:
        s = self.base.sample(t)
        e = self.eps
        return MotionSample(e * s.v1, e * s.v2, e * s.dlength, s.stretch)
