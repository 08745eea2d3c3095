"""Chebyshev-Lobatto collocation on an interval [a, b].

Values are stored at the nodes along axis 0; any trailing shape is allowed,
so a whole coupling matrix per node is handled in one call.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np
from numpy.polynomial import chebyshev as C


class ChebyshevGrid:
    def __init__(self, a: float, b: float, n: int = 64):
        if not b > a:
            raise ValueError("interval must satisfy b > a")
        if n < 4:
            raise ValueError("need at least 4 nodes")
        self.a, self.b, self.n = float(a), float(b), int(n)
        k = np.arange(self.n)
        # increasing order: s = -cos(pi k / (n-1))
        self.s = -np.cos(np.pi * k / (self.n - 1))
        self.s[0], self.s[-1] = -1.0, 1.0
        self.nodes = self.to_t(self.s)
        self.nodes[0], self.nodes[-1] = self.a, self.b
        self._half = 0.5 * (self.b - self.a)
        w = np.ones(self.n)
        w[0] = w[-1] = 0.5
        w[1::2] *= -1.0
        # barycentric weights for Lobatto points in increasing order
        self._bary = w * (-1.0) ** (self.n - 1)

    def to_t(self, s):
        return self.a + (np.asarray(s) + 1.0) * 0.5 * (self.b - self.a)

    def to_s(self, t):
        return 2.0 * (np.asarray(t, dtype=float) - self.a) / (self.b - self.a) - 1.0

    @cached_property
    def _vander(self):
        return C.chebvander(self.s, self.n - 1)

    @cached_property
    def _vander_inv(self):
        return np.linalg.inv(self._vander)

    def coefficients(self, values):
        v = np.asarray(values)
        flat = v.reshape(self.n, -1)
        return (self._vander_inv @ flat).reshape(v.shape)

    @cached_property
    def diff_matrix(self):
        """d/dt acting on nodal values."""
        n = self.n
        D = np.zeros((n, n))
        for j in range(n):
            e = np.zeros(n)
            e[j] = 1.0
            D[:, j] = C.chebval(self.s, C.chebder(self._vander_inv @ e))
        return D / self._half

    @cached_property
    def cumint_matrix(self):
        """Running integral from a, acting on nodal values."""
        n = self.n
        Q = np.zeros((n, n))
        for j in range(n):
            e = np.zeros(n)
            e[j] = 1.0
            Q[:, j] = C.chebval(self.s, C.chebint(self._vander_inv @ e, lbnd=-1.0))
        return Q * self._half

    @cached_property
    def quad_weights(self):
        return self.cumint_matrix[-1].copy()

    def derivative(self, values):
        v = np.asarray(values)
        return (self.diff_matrix @ v.reshape(self.n, -1)).reshape(v.shape)

    def cumulative_integral(self, values):
        v = np.asarray(values)
        return (self.cumint_matrix @ v.reshape(self.n, -1)).reshape(v.shape)

    def integral(self, values):
        v = np.asarray(values)
        return np.tensordot(self.quad_weights, v, axes=(0, 0))

    def interpolation_matrix(self, t):
        """Barycentric matrix mapping nodal values to values at points t."""
        s = np.atleast_1d(self.to_s(t))
        diff = s[:, None] - self.s[None, :]
        exact = diff == 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            W = self._bary[None, :] / diff
            W /= W.sum(axis=1, keepdims=True)
        rows = exact.any(axis=1)
        if rows.any():
            W[rows] = exact[rows].astype(float)
        return W

    def evaluate(self, values, t):
        v = np.asarray(values)
        W = self.interpolation_matrix(t)
        out = (W @ v.reshape(self.n, -1)).reshape((W.shape[0],) + v.shape[1:])
        return out[0] if np.ndim(t) == 0 else out

    def tail(self, values, k: int = 4):
        """Max magnitude of the top k Chebyshev coefficients (resolution check)."""
        c = self.coefficients(values)
        return float(np.max(np.abs(c[-k:])))
