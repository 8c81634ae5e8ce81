"""Exception hierarchy for qdlie."""


class QdlieError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(QdlieError, ValueError):
    """Malformed matrix, vector or parameter."""


class MatrixExpOverflowError(QdlieError, OverflowError):
    """exp(tD) would overflow double precision.

    Attributes
    ----------
    growth : float
        The log-growth ``t * max Re sigma(D)`` that was requested.
    threshold : float
        Largest admissible log-growth (``log(float max)``).
    """

    def __init__(self, growth, threshold):
        self.growth = growth
        self.threshold = threshold
        super().__init__(
            f"exp(tD) overflows: log-growth {growth:.6g} exceeds threshold {threshold:.6g}"
        )


class PreconditionError(QdlieError, ValueError):
    """A mathematical hypothesis required by an operation does not hold."""

    def __init__(self, hypothesis, message=None):
        self.hypothesis = hypothesis
        super().__init__(message or f"precondition failed: {hypothesis}")


class NotInEnd0Error(PreconditionError):
    """D is not semisimple, or has a nonzero purely imaginary eigenvalue."""


class UnsupportedInputError(QdlieError, ValueError):
    """Input outside the supported class (e.g. non-solvable Lie algebra)."""


class ConditioningWarning(UserWarning):
    """Eigenstructure is ill-conditioned; clusters were merged."""
