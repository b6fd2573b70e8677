"""Exception types raised by the canspec numerical kernels."""


class CanspecError(Exception):
    """Base class for all canspec-specific errors."""


class NotCanonicalForm(CanspecError):
    """Operation requires a traceless potential (diagonal entries q1, -q1)."""


class ACRequired(CanspecError):
    """Operation requires absolutely continuous entries.

    Sampled potentials only carry an interpolation surrogate and are
    rejected wherever the derivative of the potential enters a formula.
    """


class StepSizeUnderflow(CanspecError):
    """Adaptive integrator could not meet its tolerance with a finite step."""


class BracketFailure(CanspecError):
    """Root bracket expansion failed to enclose a sign change.

    The Pruefer endpoint angle is strictly increasing and unbounded in
    lambda, so this error signals integrator inconsistency, not math.
    """


class DerivativeMismatch(CanspecError):
    """Integral-formula discriminant derivative disagrees with the
    finite-difference estimate far beyond tolerance, which indicates a
    misconfigured integrator."""


class IndexingViolation(CanspecError):
    """Assembled spectrum table violates the eigenvalue indexing chain
    beyond slack; numerical breakdown rather than a math failure."""


class AssertionFailure(CanspecError):
    """A scalar-identity consistency check failed.

    Attributes
    ----------
    index : offending band index, when one is identifiable.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index
