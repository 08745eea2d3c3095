"""Phase readout of a Gaussian light-clock and the clock-comparison fractions."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bogoliubov import PerturbativeBogoliubov
from .cavity import AccumulatedPhase
from .errors import DomainError, UndefinedPhaseError
from .motion import CavityMotion
from .spacetime import SchwarzschildGeometry, static_proper_acceleration, tidal_acceleration

SYMPLECTIC_FORM = np.array([[0.0, 1.0], [-1.0, 0.0]])


@dataclass(frozen=True)
class GaussianClockState:
    """First moments and covariance of mode 1 in (q, p) quadratures.

    Vacuum has covariance identity/2.
    """

    mean_q: float
    mean_p: float
    covariance: np.ndarray = field(default_factory=lambda: 0.5 * np.eye(2))

    def __post_init__(self):
        cov = np.asarray(self.covariance, dtype=float)
        if cov.shape != (2, 2) or not np.allclose(cov, cov.T, rtol=0, atol=1e-14):
            raise DomainError("covariance must be a symmetric 2x2 matrix")
        # uncertainty principle: V + i/2 Omega >= 0
        ev = np.linalg.eigvalsh(cov + 0.5j * SYMPLECTIC_FORM)
        if ev.min() < -1e-12 * max(1.0, np.abs(ev).max()):
            raise DomainError("covariance violates the uncertainty relation")
        object.__setattr__(self, "covariance", cov)

    @classmethod
    def zero_phase(cls, mean_q: float, covariance=None) -> "GaussianClockState":
        """State with <p> = 0, i.e. the clock reads zero initially (for mean_q > 0)."""
        return cls(float(mean_q), 0.0, 0.5 * np.eye(2) if covariance is None else covariance)

    @classmethod
    def coherent(cls, amplitude: complex) -> "GaussianClockState":
        a = complex(amplitude)
        return cls(np.sqrt(2.0) * a.real, np.sqrt(2.0) * a.imag)

    @classmethod
    def squeezed_coherent(cls, amplitude: complex, r: float, angle: float = 0.0):
        """Coherent displacement on top of vacuum squeezed by r along ``angle``."""
        c, s = np.cos(angle), np.sin(angle)
        R = np.array([[c, -s], [s, c]])
        cov = R @ np.diag([0.5 * np.exp(-2 * r), 0.5 * np.exp(2 * r)]) @ R.T
        a = complex(amplitude)
        return cls(np.sqrt(2.0) * a.real, np.sqrt(2.0) * a.imag, 0.5 * (cov + cov.T))


def mean_phase(state: GaussianClockState) -> float:
    """atan2(<p>, <q>)."""
    if state.mean_q == 0.0 and state.mean_p == 0.0:
        raise UndefinedPhaseError("phase undefined for zero mean")
    return float(np.arctan2(state.mean_p, state.mean_q))


def transformed_phase(state0: GaussianClockState, a11: complex, b11: complex) -> float:
    """Mean phase after a Bogoliubov transformation with (1,1) entries a11, b11."""
    x0, p0 = state0.mean_q, state0.mean_p
    d, s = a11 - b11, a11 + b11
    num = -d.imag * x0 + s.real * p0
    den = d.real * x0 + s.imag * p0
    if num == 0.0 and den == 0.0:
        raise UndefinedPhaseError("transformed mean vanishes")
    return float(np.arctan2(num, den))


def _wrap(x):
    return (np.asarray(x) + np.pi) % (2 * np.pi) - np.pi


def state_independence_check(a11: complex, b11: complex, states) -> float:
    """Largest pairwise spread of the clock reading over ``states``.

    The reading is the transformed phase relative to each state's own
    initial phase, so negative <q>_0 (initial phase pi) is also allowed.
    """
    readings = []
    for st in states:
        if st.mean_p != 0.0:
            raise DomainError("ensemble states must have <p>_0 = 0")
        if st.mean_q == 0.0:
            raise DomainError("ensemble states need nonzero <q>_0")
        readings.append(transformed_phase(st, a11, b11) - mean_phase(st))
    readings = np.asarray(readings)
    dev = _wrap(readings - readings[0])
    return float(dev.max() - dev.min())


def random_zero_phase_states(rng: np.random.Generator, n: int):
    """Random coherent/squeezed/thermal mixtures with <p>_0 = 0."""
    out = []
    for _ in range(n):
        x0 = rng.choice([-1.0, 1.0]) * 10 ** rng.uniform(-2, 2)
        r = rng.uniform(0.0, 2.0)
        angle = rng.uniform(0, np.pi)
        nth = rng.uniform(1.0, 3.0)     # thermal inflation keeps it physical
        st = GaussianClockState.squeezed_coherent(0.0, r, angle)
        out.append(GaussianClockState.zero_phase(x0, nth * st.covariance))
    return out


def quantum_phase_shift(alpha1: complex, alpha2: complex, beta1: complex, beta2: complex) -> float:
    """Motion-induced phase from the barred (1,1) amplitudes, to second order."""
    z1 = alpha1 - beta1
    z2 = alpha2 - beta2
    return float(-(z1.imag + z2.imag) + z1.real * z1.imag)


def _quantum_phase_array(a1, a2, b1, b2):
    z1 = np.asarray(a1) - np.asarray(b1)
    z2 = np.asarray(a2) - np.asarray(b2)
    return -(z1.imag + z2.imag) + z1.real * z1.imag


def classical_phases(motion: CavityMotion, nodes: int = 64):
    """(theta_A, theta_B_cl) at the end of the motion.

    Both are ~1e9 rad for a metre cavity; use :func:`compare_clocks` for the
    difference, which never subtracts the two totals.
    """
    ph = AccumulatedPhase(motion, nodes)
    T = motion.duration
    theta_A = -ph.omega0 * T
    return float(theta_A), float(theta_A - ph.drift(T))


def closed_form_classical_fraction(geom: SchwarzschildGeometry, r_A: float, L0: float, T: float) -> float:
    """Weak-field estimate of the classical fractional discrepancy at time T."""
    a_A = float(static_proper_acceleration(geom, r_A))
    c2 = geom.c ** 2
    return 0.5 * (a_A * L0 / c2 - geom.r_s / (3.0 * r_A)) * (geom.c * T / r_A) ** 2


@dataclass
class TidalRatioReport:
    tidal_acceleration: float
    combination: float              # a_tide T^2 / (6 L0)
    F_cl: float
    F_tau: float
    ratio_reading: float            # (1 - combination) F_tau
    ratio_discrepancy: float        # F_cl - ratio_reading
    standalone_discrepancy: float   # |F_cl| - combination


def tidal_ratio_diagnostic(geom: SchwarzschildGeometry, r_A: float, L0: float, T: float,
                           F_cl: float, F_tau: float) -> TidalRatioReport:
    """Both readings of the small-clock tidal relation; no verdict is drawn.

    a_tide is the leading-order differential acceleration across L0.
    """
    if geom.r_s == 0.0:
        a_t = 0.0
    else:
        a_t = float(tidal_acceleration(geom, r_A, L0))
    comb = a_t * T ** 2 / (6.0 * L0)
    ratio = (1.0 - comb) * F_tau
    return TidalRatioReport(a_t, comb, F_cl, F_tau, ratio, F_cl - ratio, abs(F_cl) - comb)


@dataclass
class ClockComparison:
    t: np.ndarray
    theta_A: np.ndarray
    theta_B_cl: np.ndarray
    theta_B_qu: np.ndarray
    F_cl: np.ndarray
    F_qu: np.ndarray
    F_tau: np.ndarray
    theta_B_qu_error: float = 0.0
    method: str = ""

    @property
    def theta_B(self):
        return self.theta_B_cl + self.theta_B_qu

    def end(self) -> dict:
        return {k: float(getattr(self, k)[-1]) for k in
                ("t", "theta_A", "theta_B_cl", "theta_B_qu", "F_cl", "F_qu", "F_tau")}


def compare_clocks(motion: CavityMotion, coeffs: PerturbativeBogoliubov | None, t,
                   nodes: int = 64, secular: bool = False) -> ClockComparison:
    """Time series of the A/B phases and fractional discrepancies on ``t``.

    ``coeffs`` must have been built with ``keep_series=True``; pass None to
    skip the quantum part.  F_tau is filled in when the motion exposes a
    proper-time deficit (free fall), otherwise zero.
    """
    t = np.asarray(t, dtype=float)
    ph = AccumulatedPhase(motion, nodes)
    theta_A = -ph.omega0 * t
    drift = ph.drift(t)
    theta_B_cl = theta_A - drift
    pos = t > 0
    F_cl = np.zeros_like(t)
    F_cl[pos] = drift[pos] / (ph.omega0 * t[pos])
    if coeffs is not None:
        s = coeffs.clock_mode_secular(t) if secular else coeffs.clock_mode_series(t)
        theta_qu = _quantum_phase_array(s.alpha1, s.alpha2, s.beta1, s.beta2)
        err = float(coeffs.error_estimates.get("second_order_quadrature", 0.0)
                    + coeffs.error_estimates.get("second_order_truncation_11", 0.0)
                    + coeffs.error_estimates.get("first_order", 0.0))
        method = coeffs.method
    else:
        theta_qu, err, method = np.zeros_like(t), 0.0, ""
    F_qu = np.zeros_like(t)
    F_qu[pos] = theta_qu[pos] / theta_A[pos]
    F_tau = np.zeros_like(t)
    deficit = getattr(motion, "proper_time_deficit", None)
    if deficit is not None:
        d = np.asarray(deficit(t), dtype=float)
        F_tau[pos] = d[pos] / t[pos]
    return ClockComparison(t, theta_A, theta_B_cl, theta_qu, F_cl, F_qu, F_tau, err, method)
