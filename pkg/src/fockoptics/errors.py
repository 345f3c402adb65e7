"""Exception types raised by the engine."""


class FockError(ValueError):
    """Base class for all domain errors raised by fockoptics."""


class DomainError(FockError):
    """An argument lies outside the domain of the operation."""


class DimensionMismatch(FockError):
    """Two states or operators live on different truncated bases."""


class TruncationError(FockError):
    """The truncated basis is too small for the requested state or operation."""


class ConvergenceError(FockError):
    """An iterative or series evaluation failed to reach its tolerance."""


class NonHermitianError(FockError):
    """A Hermitian operator was required."""


class SplitterError(FockError):
    """Splitter coefficients violate a losslessness or symmetry constraint."""
