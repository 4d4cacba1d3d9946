"""Exception hierarchy shared by all modules."""


class ThetaAgmError(Exception):
    """Base class for errors raised by this package."""


class DomainError(ThetaAgmError, ValueError):
    """An argument lies outside the domain of the operation."""


class NonConvergence(ThetaAgmError, ArithmeticError):
    """A series or iteration hit its term/iteration cap before converging."""


class CapacityError(ThetaAgmError):
    """An enumeration would exceed its configured size cap."""


class DensityError(DomainError):
    """The lattice density is not an even positive integer."""


class OptimizationError(ThetaAgmError, ArithmeticError):
    """Numerical extremization failed to converge."""


class Unsupported(ThetaAgmError, NotImplementedError):
    """The operation is not defined for this kind of input."""


class ConsistencyError(ThetaAgmError, ArithmeticError):
    """Two independent routes to the same quantity disagree."""
