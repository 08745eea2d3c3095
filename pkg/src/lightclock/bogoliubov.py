"""Second-order perturbative Bogoliubov coefficients of the moving cavity.

Every running integral is kept in the form

    \\int_0^t S(t') exp(-i q Theta_1(t')) dt' = R(t) exp(-i q Theta_1(t)) - R(0)

with S and R smooth and sampled on one Chebyshev grid.  Because
Theta_m = m Theta_1, every mode product is again of this form, and the
time-ordered double integrals reduce to matrix products of nodal envelopes
followed by one more antiderivative.  Amplitudes are kept without the
classical prefactor exp(i Theta_m(T)) throughout; that prefactor is the row
phase divided out by :func:`strip_prefactor`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .cavity import AccumulatedPhase, CouplingMatrices, ModeBasis, coupling_matrices
from .chebyshev import ChebyshevGrid
from .errors import DomainError
from .motion import CavityMotion
from .oscillatory import antiderivative

DEFAULT_N_MAX = 20
DEFAULT_P_MAX = 40
DEFAULT_NODES = 64


class ClockModeSeries(NamedTuple):
    """Stripped (1,1) coefficients sampled along the motion."""

    t: np.ndarray
    alpha1: np.ndarray
    alpha2: np.ndarray
    beta1: np.ndarray
    beta2: np.ndarray


@dataclass
class PerturbativeBogoliubov:
    """Order-separated coefficients with the classical row phase removed.

    ``alpha1`` etc. are the barred amplitudes:  alpha^B = e^{-i m theta_cl}
    (1 + alpha1 + alpha2),  beta^B = e^{-i m theta_cl} (beta1 + beta2).
    """

    alpha1: np.ndarray
    alpha2: np.ndarray
    beta1: np.ndarray
    beta2: np.ndarray
    theta_cl: float
    theta_cl_turns: tuple
    n_max: int
    p_max: int
    error_estimates: dict = field(default_factory=dict)
    method: str = "levin"
    # full first-order blocks over the intermediate range p <= p_max
    alpha1_full: np.ndarray | None = None
    beta1_full: np.ndarray | None = None
    _series: object = field(default=None, repr=False)

    def row_phase(self):
        """exp(i Theta_m(T)) = exp(-i m theta_cl) for m = 1..n_max, from the reduced phase."""
        m = np.arange(1, self.n_max + 1)
        _, r = self.theta_cl_turns
        return np.exp(1j * np.mod(m * r, 2 * np.pi))

    def raw(self):
        """(alpha0, alpha1, alpha2, beta1, beta2) including the classical prefactor."""
        ph = self.row_phase()[:, None]
        return (np.diag(ph[:, 0]), ph * self.alpha1, ph * self.alpha2,
                ph * self.beta1, ph * self.beta2)

    def clock_mode_series(self, t) -> ClockModeSeries:
        if self._series is None:
            raise ValueError("time series data not retained")
        return self._series(np.asarray(t, dtype=float))

    def clock_mode_secular(self, t) -> ClockModeSeries:
        """(1,1) coefficients with every exp(-i q Theta_1), q != 0, term dropped."""
        if self._series is None:
            raise ValueError("time series data not retained")
        return self._series(np.asarray(t, dtype=float), secular=True)


class _Assembly:
    """Nodal envelopes and their antiderivatives for one motion."""

    def __init__(self, motion: CavityMotion, p_max: int, nodes: int, method: str,
                 couplings: CouplingMatrices | None, coupling_mode: str):
        if coupling_mode not in ("instantaneous", "frozen"):
            raise ValueError("coupling_mode must be 'instantaneous' or 'frozen'")
        self.motion = motion
        self.P = p_max
        self.method = method
        self.phase = AccumulatedPhase(motion, nodes)
        self.grid: ChebyshevGrid = self.phase.grid
        if couplings is None:
            couplings = coupling_matrices(ModeBasis(0.0, motion.length0, p_max))
        if couplings.n_max < p_max:
            raise DomainError("coupling matrices smaller than p_max")
        cm = couplings.at_length(motion.length0)
        A = cm.A[:, :p_max, :p_max]
        B = cm.B[:, :p_max, :p_max]
        s = motion.sample(self.grid.nodes)
        scale = (motion.length0 / (motion.length0 + s.stretch)
                 if coupling_mode == "instantaneous" else np.ones_like(s.stretch))
        v1 = (s.v1 * scale)[:, None, None]
        dv = (s.dlength * scale)[:, None, None]
        # sum_j M^j v_j = (M^1 + M^2) v_1 + M^2 (v_2 - v_1)
        self.SA = (A[0] + A[1])[None] * v1 + A[1][None] * dv
        self.SB = (B[0] + B[1])[None] * v1 + B[1][None] * dv
        self.omega1 = self.phase.omega_nodes
        idx = np.arange(1, p_max + 1)
        self.q_minus = idx[:, None] - idx[None, :]
        self.q_plus = idx[:, None] + idx[None, :]
        self.errors = {}
        self.RA, self.errors["first_alpha"] = self._anti(self.SA, self.q_minus)
        self.RB, self.errors["first_beta"] = self._anti(self.SB, self.q_plus)

    def _anti(self, S, qmat):
        R = np.zeros(S.shape, complex)
        err = 0.0
        for q in np.unique(qmat):
            mask = qmat == q
            res = antiderivative(self.grid, float(q), self.omega1, S[:, mask], self.method)
            R[:, mask] = res.R
            err = max(err, res.error)
        err += self.grid.tail(S) / max(np.max(np.abs(S)), 1e-300) if np.any(S) else 0.0
        return R, err

    def end_values(self, R, qmat):
        F = self._factors(np.unique(qmat), self.motion.duration)
        return R[-1] * F(qmat) - R[0]

    def _factors(self, qs, t):
        t = float(t)
        table = {int(q): complex(self.phase.factor(int(q), t)) for q in qs}
        return lambda qmat: np.vectorize(table.__getitem__, otypes=[complex])(qmat)

    def second_order(self, N, P=None):
        P = self.P if P is None else P
        SA, SB = self.SA[:, :N, :P], self.SB[:, :N, :P]
        RA, RB = self.RA[:, :P, :N], self.RB[:, :P, :N]
        E = SA @ RA + SB @ np.conj(RB)
        G = SA @ RB + SB @ np.conj(RA)
        RE, eE = self._anti(E, self.q_minus[:N, :N])
        RG, eG = self._anti(G, self.q_plus[:N, :N])
        return E, G, RE, RG, max(eE, eG)


def _assemble(motion, n_max, p_max, nodes, method, couplings, coupling_mode):
    if p_max < n_max:
        raise DomainError("p_max must be >= n_max")
    return _Assembly(motion, p_max, nodes, method, couplings, coupling_mode)


def first_order_coefficients(motion: CavityMotion, couplings: CouplingMatrices | None = None,
                             n_max: int = DEFAULT_N_MAX, method: str = "levin",
                             nodes: int = DEFAULT_NODES, coupling_mode="instantaneous"):
    """Raw (alpha^(1), beta^(1)) including the prefactor exp(i Theta_m(T))."""
    asm = _assemble(motion, n_max, n_max, nodes, method, couplings, coupling_mode)
    a1 = asm.end_values(asm.RA, asm.q_minus)
    b1 = asm.end_values(asm.RB, asm.q_plus)
    ph = _row_phase(asm.phase, motion.duration, n_max)[:, None]
    return ph * a1, ph * b1


def _row_phase(phase: AccumulatedPhase, T, n):
    m = np.arange(1, n + 1)
    _, r = phase.reduced(T, 1)
    return np.exp(1j * np.mod(m * float(r), 2 * np.pi))


def second_order_coefficients(motion: CavityMotion, couplings: CouplingMatrices | None = None,
                              n_max: int = DEFAULT_N_MAX, p_max: int = DEFAULT_P_MAX,
                              method: str = "levin", nodes: int = DEFAULT_NODES,
                              coupling_mode="instantaneous"):
    """Raw (alpha^(2), beta^(2)) including the prefactor exp(i Theta_m(T))."""
    co = perturbative_bogoliubov(motion, n_max, p_max, method=method, nodes=nodes,
                                 couplings=couplings, coupling_mode=coupling_mode,
                                 keep_series=False)
    _, _, a2, _, b2 = co.raw()
    return a2, b2


def perturbative_bogoliubov(motion: CavityMotion, n_max: int = DEFAULT_N_MAX,
                            p_max: int = DEFAULT_P_MAX, method: str = "levin",
                            nodes: int = DEFAULT_NODES,
                            couplings: CouplingMatrices | None = None,
                            coupling_mode: str = "instantaneous",
                            keep_series: bool = True) -> PerturbativeBogoliubov:
    """All barred coefficients up to second order for ``motion`` on [0, T]."""
    asm = _assemble(motion, n_max, p_max, nodes, method, couplings, coupling_mode)
    T = motion.duration
    N, P = n_max, p_max
    a1P = asm.end_values(asm.RA, asm.q_minus)
    b1P = asm.end_values(asm.RB, asm.q_plus)

    def second(Pm):
        E, G, RE, RG, err = asm.second_order(N, Pm)
        RA0, RB0 = asm.RA[0, :Pm, :N], asm.RB[0, :Pm, :N]
        corr_a = a1P[:N, :Pm] @ RA0 + b1P[:N, :Pm] @ np.conj(RB0)
        corr_b = a1P[:N, :Pm] @ RB0 + b1P[:N, :Pm] @ np.conj(RA0)
        a2 = asm.end_values(RE, asm.q_minus[:N, :N]) - corr_a
        b2 = asm.end_values(RG, asm.q_plus[:N, :N]) - corr_b
        return a2, b2, err, (RE, RG)

    a2, b2, err2, (RE, RG) = second(P)
    half = max(N, P // 2)
    if half < P:
        a2h, b2h, _, _ = second(half)
        trunc = float(max(abs(a2[0, 0] - a2h[0, 0]), abs(b2[0, 0] - b2h[0, 0])))
    else:
        trunc = float("nan")
    s1 = max(np.max(np.abs(a1P)), np.max(np.abs(b1P)), 1e-300)
    s2 = max(np.max(np.abs(a2)), np.max(np.abs(b2)), 1e-300)
    errors = {
        "first_order": (asm.errors["first_alpha"] + asm.errors["first_beta"]) * s1,
        "second_order_quadrature": err2 * s2
        + (asm.errors["first_alpha"] + asm.errors["first_beta"]) * s2,
        "second_order_truncation_11": trunc,
        "phase": asm.phase.error_estimate,
    }
    turns = asm.phase.reduced(T, 1)
    theta1 = float(asm.phase(T, 1))
    series = _SeriesEvaluator(asm, a1P, b1P, RE, RG) if keep_series else None
    return PerturbativeBogoliubov(
        alpha1=a1P[:N, :N], alpha2=a2, beta1=b1P[:N, :N], beta2=b2,
        theta_cl=-theta1, theta_cl_turns=(float(turns[0]), float(turns[1])),
        n_max=N, p_max=P, error_estimates=errors, method=method,
        alpha1_full=a1P, beta1_full=b1P, _series=series)


class _SeriesEvaluator:
    """(1,1) coefficients at arbitrary t in [0, T] from the stored antiderivatives."""

    def __init__(self, asm: _Assembly, a1P, b1P, RE, RG):
        self.asm = asm
        P = asm.P
        self.RA_row = asm.RA[:, 0, :]          # R for alpha1_{1p}, q = 1 - p
        self.RB_row = asm.RB[:, 0, :]          # q = 1 + p
        self.RA_col0 = asm.RA[0, :, 0]         # R_{p1}(0)
        self.RB_col0 = asm.RB[0, :, 0]
        self.RE11 = RE[:, 0, 0]
        self.RG11 = RG[:, 0, 0]
        p = np.arange(1, P + 1)
        self.q_a = 1 - p
        self.q_b = 1 + p

    def _phase_table(self, t, qs):
        _, r = self.asm.phase.reduced(t, 1)
        qr = np.mod(np.multiply.outer(r, qs.astype(float)), 2 * np.pi)
        return np.exp(-1j * qr)

    def __call__(self, t, secular=False):
        grid = self.asm.grid
        W = grid.interpolation_matrix(t)
        RA_t, RB_t = W @ self.RA_row, W @ self.RB_row
        if secular:
            Fa = (self.q_a == 0).astype(complex)[None, :] + 0 * RA_t
            Fb = np.zeros_like(RB_t)
            F2 = np.zeros(len(t), complex)
        else:
            Fa = self._phase_table(t, self.q_a)
            Fb = self._phase_table(t, self.q_b)
            F2 = self._phase_table(t, np.array([2]))[:, 0]
        a1row = RA_t * Fa - self.RA_row[0][None, :]
        b1row = RB_t * Fb - self.RB_row[0][None, :]
        a2 = (W @ self.RE11) - self.RE11[0] - (a1row @ self.RA_col0
                                               + b1row @ np.conj(self.RB_col0))
        b2 = (W @ self.RG11) * F2 - self.RG11[0] - (a1row @ self.RB_col0
                                                    + b1row @ np.conj(self.RA_col0))
        return ClockModeSeries(np.asarray(t), a1row[:, 0], a2, b1row[:, 0], b2)


def strip_prefactor(raw_alpha1, raw_alpha2, raw_beta1, raw_beta2, theta_cl):
    """Divide out exp(-i m theta_cl) row by row.

    ``theta_cl`` is either a float or the pair (turns, residual) of
    Theta_1(T) = -theta_cl, as stored on :class:`PerturbativeBogoliubov`.
    """
    n = np.shape(raw_alpha1)[0]
    m = np.arange(1, n + 1)
    if isinstance(theta_cl, tuple):
        ph = np.exp(-1j * np.mod(m * theta_cl[1], 2 * np.pi))
    else:
        ph = np.exp(1j * m * theta_cl)
    ph = ph[:, None]
    return (ph * np.asarray(raw_alpha1), ph * np.asarray(raw_alpha2),
            ph * np.asarray(raw_beta1), ph * np.asarray(raw_beta2))


def apply_prefactor(alpha1, alpha2, beta1, beta2, theta_cl):
    """Inverse of :func:`strip_prefactor`."""
    n = np.shape(alpha1)[0]
    m = np.arange(1, n + 1)
    if isinstance(theta_cl, tuple):
        ph = np.exp(1j * np.mod(m * theta_cl[1], 2 * np.pi))
    else:
        ph = np.exp(-1j * m * theta_cl)
    ph = ph[:, None]
    return ph * alpha1, ph * alpha2, ph * beta1, ph * beta2


class SymplecticDefect(NamedTuple):
    first_order: float
    second_order: float
    first_order_abs: float
    second_order_abs: float


def symplectic_defect(co: PerturbativeBogoliubov,
                      reference: PerturbativeBogoliubov | None = None) -> SymplecticDefect:
    """Order-collected defects of alpha alpha^+ - beta beta^+ = 1 and alpha beta^T = beta alpha^T.

    Products over intermediate modes run over the full p <= p_max range the
    second-order terms were built with, so the identities hold to rounding.
    With ``reference`` (same motion, larger p_max) the products use its longer
    first-order rows instead, and the second-order defect then measures
    the intermediate-mode truncation of ``co``.  Relative values are
    normalised by the largest coefficient of that order.
    """
    N = co.n_max
    src = co if reference is None else reference
    if reference is not None and (reference.n_max < N or reference.p_max < co.p_max):
        raise DomainError("reference must use at least as many modes")
    a1 = src.alpha1_full if src.alpha1_full is not None else src.alpha1
    b1 = src.beta1_full if src.beta1_full is not None else src.beta1
    a1N, b1N = a1[:N], b1[:N]
    d1 = max(np.max(np.abs(co.alpha1 + co.alpha1.conj().T)),
             np.max(np.abs(co.beta1 - co.beta1.T)))
    herm = co.alpha2 + co.alpha2.conj().T + a1N @ a1N.conj().T - b1N @ b1N.conj().T
    sym = co.beta2 - co.beta2.T - (a1N @ b1N.T - b1N @ a1N.T)
    d2 = max(np.max(np.abs(herm)), np.max(np.abs(sym)))
    s1 = max(np.max(np.abs(co.alpha1)), np.max(np.abs(co.beta1)))
    s2 = max(np.max(np.abs(co.alpha2)), np.max(np.abs(co.beta2)))
    return SymplecticDefect(float(d1 / s1) if s1 else 0.0, float(d2 / s2) if s2 else 0.0,
                            float(d1), float(d2))
