"""Exception hierarchy shared by every module."""


class QMSError(Exception):
    """Base class for all library errors."""


class NonConvergence(QMSError):
    """An iterative linear-algebra routine failed to converge."""


class DomainError(QMSError):
    """A scalar function was evaluated outside its domain."""


class SingularReference(QMSError):
    """A reference density that must be faithful is rank deficient."""


class QuadratureBudgetExceeded(QMSError):
    """Adaptive quadrature needed more subdivisions than allowed."""


class DimensionMismatch(QMSError):
    """Operands have incompatible dimensions."""


class NotSymmetric(QMSError):
    """A map failed its GNS-symmetry check."""


class AlgebraClosureFailure(QMSError):
    """A computed fixed-point space is not closed under products."""


class NotReached(QMSError):
    """A discrete search hit its iteration cap."""


class PreconditionFailed(QMSError):
    """A documented precondition of an operation does not hold."""


class BracketNotFound(QMSError):
    """A bisection could not bracket its target."""


class ModularMismatch(QMSError):
    """A jump operator is not an eigenvector of the modular group."""


class NotErgodic(QMSError):
    """A classical chain has more than one stationary class."""


class SpecParseError(QMSError):
    """A model or channel description could not be parsed."""
