"""Exception hierarchy for the solver."""


class GradRubinError(Exception):
    """Base class for all solver errors."""


class GridError(GradRubinError, ValueError):
    """Array shape or grid parameters do not match."""


class DomainError(GradRubinError, ValueError):
    """A point lies outside the channel."""


class CompatibilityError(GradRubinError):
    """Normal traces on the two walls carry different net flux."""


class SingularFieldError(GradRubinError):
    """1 + b2 is not positive somewhere, field lines are not transversal."""


class FoldError(GradRubinError):
    """The flow map stopped being monotone in the foot-point."""


class KernelError(GradRubinError):
    """Kernel quadrature produced non-finite values."""


class SolvabilityError(GradRubinError):
    """The discrete current equation is singular."""


class ConfigError(GradRubinError):
    """Run configuration could not be parsed or validated."""
