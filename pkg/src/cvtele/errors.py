"""Exception hierarchy shared across the package."""


class CVTeleError(Exception):
    """Base class for all package errors."""


class DomainError(CVTeleError, ValueError):
    """Non-finite or out-of-domain numeric input."""


class SpecError(CVTeleError, ValueError):
    """Invalid state, resource or channel specification."""


class TruncationError(CVTeleError):
    """Fock truncation could not capture the requested norm."""


class QuadratureError(CVTeleError):
    """Phase-space integral failed to converge or left its valid range."""


class OptimizationError(CVTeleError):
    """Optimizer or root finder did not converge."""


class ConfigError(CVTeleError):
    """Malformed experiment configuration."""
