"""Exception hierarchy shared across the package."""


class QkzError(Exception):
    """Base class for all package errors."""


class ConfigError(QkzError):
    """Invalid parameter combination (bad q, grading, chain, CLI flags)."""


class ScalarDomainError(QkzError):
    """Scalar evaluation outside its domain of validity."""


class DivergentBaseError(ScalarDomainError):
    """Infinite product or series called with |base| >= 1."""


class TruncationError(ScalarDomainError):
    """Truncation tail bound exceeds the requested residual tolerance."""


class PoleError(ScalarDomainError):
    """Evaluation at (or too close to) a zero of a denominator factor."""


class DegeneratePointError(QkzError):
    """Intertwiner solve at a non-simple point of the spectral-parameter lattice."""
