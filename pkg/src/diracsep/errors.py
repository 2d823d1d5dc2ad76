"""Exception types shared across the package."""


class DiracSepError(Exception):
    """Base class for all library errors."""


class DomainError(DiracSepError):
    """A point, parameter, or interval lies outside the valid domain."""


class SingularFrameError(DiracSepError):
    """A frame field is degenerate (vanishing determinant) at the point."""


class CliffordError(DiracSepError):
    """Gamma matrices handed to an expansion do not close the algebra."""


class AdmissibilityError(DiracSepError):
    """A potential is incompatible with the requested symmetry structure."""


class IntegrationError(DiracSepError):
    """The ODE integrator could not meet its contract."""


class ConfigError(DiracSepError):
    """A run configuration is malformed or inconsistent."""
