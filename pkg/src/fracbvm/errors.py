"""Exception vocabulary shared across the package.

The split mirrors how failures are reported to the CLI: domain errors are
bad mathematical input (rejected up front), usage errors are malformed calls
(dimension mismatches, out-of-range indices, guard violations), and the
runtime errors signal numerical trouble discovered mid-computation.
"""


class FracbvmError(Exception):
    """Base class for all package-specific errors."""


class DomainError(FracbvmError, ValueError):
    """Mathematically inadmissible input (e.g. alpha outside (1,2),
    negative diffusion coefficients)."""


class UsageError(FracbvmError, ValueError):
    """Malformed call: dimension mismatch, out-of-range index, step count
    too small for the scheme, and similar."""


class SizeGuardError(UsageError):
    """A dense-path request exceeded the size guard that protects against
    accidental O(n^2)/O(n^3) blowups."""


class UnsupportedConfigurationError(UsageError):
    """The requested quantity is only defined for a restricted
    configuration (e.g. Wiener sums need constant coefficients)."""


class SingularPreconditionerError(FracbvmError, RuntimeError):
    """A preconditioner (or one of its inner circulant/shifted systems)
    is numerically singular; the message names the offending index."""


class InnerSolveError(FracbvmError, RuntimeError):
    """An iterative inner solve inside a preconditioner application failed
    to reach its tolerance; the message names the shift index."""


class SingularMatrixError(FracbvmError, RuntimeError):
    """A factorization or transform-domain solve hit a (numerically)
    singular matrix (dense oracle LU, circulant with a zero eigenvalue)."""
