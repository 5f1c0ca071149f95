"""Exception hierarchy shared across the package.

The CLI maps these onto distinct exit codes, so computational code should
raise the most specific class that applies rather than a bare ValueError.
"""


class IsingFFError(Exception):
    """Base class for all package-specific errors."""


class DomainError(IsingFFError, ValueError):
    """Input outside the mathematical domain of an operation.

    Covers non-ferromagnetic couplings, moduli outside (0, 1), arguments on
    branch cuts or too close to poles, unbalanced interpolation inputs, and
    malformed Fock states.
    """


class ConvergenceError(IsingFFError, ArithmeticError):
    """A series or iteration failed to reach working precision."""


class SingularMatrixError(IsingFFError, ArithmeticError):
    """Matrix singular to working tolerance."""


class AmbiguousLabelError(IsingFFError, RuntimeError):
    """Eigenstate quantum numbers could not be matched to unique Fock labels."""


class ResourceError(IsingFFError, RuntimeError):
    """Requested computation exceeds the dense-operator size limits."""


class VerificationError(IsingFFError, AssertionError):
    """A cross-check residual exceeded its tolerance."""
