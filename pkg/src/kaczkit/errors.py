"""Exception types shared across the package.

The CLI maps ConfigError to exit code 2 and every other KaczkitError
(numerical failures) to exit code 3.
"""


class KaczkitError(Exception):
    """Base class for all package errors."""


class ConfigError(KaczkitError):
    """Invalid experiment configuration."""


class InvalidSpectrumError(KaczkitError):
    """Singular-value list is empty, non-positive, or increasing."""


class RankDeficiencyError(KaczkitError):
    """Least-squares matrix is numerically rank deficient."""

    def __init__(self, pivot: int, value: float, threshold: float):
        self.pivot = pivot
        self.value = value
        self.threshold = threshold
        super().__init__(
            f"rank deficiency at pivot {pivot}: |R[{pivot},{pivot}]| = {value:.3e} "
            f"<= {threshold:.3e}"
        )


class ConvergenceError(KaczkitError):
    """Iterative routine did not converge within its budget."""

    def __init__(self, message: str, residual: float | None = None):
        self.residual = residual
        super().__init__(message)


class InvalidLabelError(KaczkitError):
    """Labels must be exactly +1 or -1."""


class TooFewRowsError(KaczkitError):
    """Pairwise differences need at least two rows."""


class PairIndexError(KaczkitError):
    """Pair rank or pair index out of range."""


class SampleSizeError(KaczkitError):
    """Requested more rows than the distribution can supply."""


class EmptySupportError(KaczkitError):
    """Sampling distribution has no sampleable rows."""


class DegenerateSpectrumError(KaczkitError):
    """All spectral coefficients vanish; weights undefined."""


class ZeroRowError(KaczkitError):
    """Operation requires a row with positive norm."""


class EmptySampleError(KaczkitError):
    """Solver step received an empty candidate set."""


class MissingSvdError(KaczkitError):
    """System carries no singular-value information."""


class NonFiniteIterateError(KaczkitError):
    """Solver iterate left the finite range."""


class InfeasibleRegionError(KaczkitError):
    """Linear program has no feasible point."""


class UnboundedRegionError(KaczkitError):
    """Linear program objective is unbounded."""
