"""Exception hierarchy.

Every numerical precondition failure raises a subclass of
:class:`ScatteringError`; the command line maps these to exit status 2.
"""


class ScatteringError(ValueError):
    """Base class for numerical precondition violations."""


class SingularOriginError(ScatteringError):
    """Potential evaluated at r = 0 where it is singular (Yukawa)."""


class ResonancePoleError(ScatteringError):
    """Scattering length diverges: zero-energy bound state at threshold."""


class PoleError(ScatteringError):
    """An effective-range function or expansion is evaluated at a pole."""


class DegenerateError(ScatteringError):
    """A normalization or identity degenerates (cos(gamma R) or cos(delta) ~ 0)."""


class ConfigurationError(ScatteringError):
    """Solver configuration is inconsistent with the potential."""


class QuadratureError(ScatteringError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class BracketError(ScatteringError):
    """Root bracket contains a pole or no sign change."""


class FitInversionError(ScatteringError):
    """Fitted slope cannot be mapped back to a positive effective range."""

    def __init__(self, message, slope=None):
        super().__init__(message)
        self.slope = slope
