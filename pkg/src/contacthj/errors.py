"""Exception hierarchy shared by all modules."""


class ContactHJError(Exception):
    """Base class for every error raised by this package."""


class NonFiniteDerivative(ContactHJError):
    """A sampled Hamiltonian derivative came out NaN or infinite."""


class AssumptionAViolated(ContactHJError):
    """The drift B(x) vanishes or changes sign on the circle."""


class QuadratureDivergence(ContactHJError):
    """Grid refinement moved a quadrature result more than tolerated."""


class PeriodMismatch(ContactHJError):
    """The circle flow failed to return to its start after one period."""


class DegenerateMu(ContactHJError):
    """mu = 0: no strict certificate of either sign exists."""


class EpsOutOfRange(ContactHJError):
    """The requested amplitude lies outside the admissible range."""


class RegimeMismatch(ContactHJError):
    """(mu, theta) fall outside every certificate regime."""


class MuNotNegative(ContactHJError):
    """Periodic subsolutions require mu < 0."""


class SignViolation(ContactHJError):
    """A certificate residual has the wrong sign somewhere."""

    def __init__(self, message, x=None, t=None, residual=None):
        super().__init__(message)
        self.x = x
        self.t = t
        self.residual = residual


class CFLViolation(ContactHJError):
    """Time step too large for the dissipation coefficient."""


class BlowUp(ContactHJError):
    """The evolved solution exceeded the configured sup-norm threshold."""


class NonFinite(ContactHJError):
    """A trajectory left the realm of finite floating point numbers."""


class DegenerateWindow(ContactHJError):
    """Too few usable samples inside the requested fit window."""


class NoConvergence(ContactHJError):
    """Fixed point iteration did not settle within the iteration budget."""


class Trivialized(ContactHJError):
    """The converged fixed point shows no genuine time variation."""


class ConfigError(ContactHJError):
    """Invalid experiment configuration."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field
