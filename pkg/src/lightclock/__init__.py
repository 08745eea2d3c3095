"""Quantum light-clock in a radially falling cavity in Schwarzschild spacetime."""

from .bogoliubov import (PerturbativeBogoliubov, apply_prefactor, first_order_coefficients,
                         perturbative_bogoliubov, second_order_coefficients, strip_prefactor,
                         symplectic_defect)
from .cavity import (AccumulatedPhase, CouplingMatrices, ModeBasis, accumulated_phase,
                     coupling_matrices, kg_inner_product, mode_derivative, mode_frequency,
                     mode_function)
from .clock import (ClockComparison, GaussianClockState, classical_phases,
                    closed_form_classical_fraction, compare_clocks, mean_phase,
                    quantum_phase_shift, state_independence_check, tidal_ratio_diagnostic,
                    transformed_phase)
from .errors import *  # noqa: F401,F403
from .geodesics import (AtRadius, AtTime, CavityTrajectory, DripGeodesic, fall_coordinate_time,
                        fractional_proper_time, integrate_drip, mirror_pair)
from .motion import CavityMotion, PrescribedMotion
from .oscillatory import OscillatoryIntegralSpec, oscillatory_integral
from .scenario import ScenarioConfig, load_config, run_drop, sweep_length, sweep_schwarzschild, validate
from .spacetime import (EARTH_MASS, EARTH_RADIUS, GRAVITATIONAL_CONSTANT, SPEED_OF_LIGHT,
                        SchwarzschildGeometry, lapse, radius_from_tortoise,
                        static_proper_acceleration, static_proper_time, tidal_acceleration,
                        tortoise)

__version__ = "0.1.0"
