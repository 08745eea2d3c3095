"""Exception hierarchy shared by all modules."""


class LightClockError(Exception):
    """Base class for every error raised by the package."""


class DomainError(LightClockError, ValueError):
    """An argument lies outside the region the model covers (e.g. r <= r_s)."""


class IntegrationError(LightClockError, RuntimeError):
    """An ODE or quadrature did not reach its tolerance."""


class ConvergenceError(IntegrationError):
    """An iteration or truncation-doubling test failed to converge."""


class MethodInfeasibleError(LightClockError, ValueError):
    """The requested numerical method cannot handle the problem size."""


class RemainderTooLargeError(IntegrationError):
    """The asymptotic series did not converge to the requested tolerance."""


class UndefinedPhaseError(LightClockError, ValueError):
    """The mean phase is undefined (zero first moments)."""


class ConfigError(LightClockError, ValueError):
    """Invalid scenario configuration."""
