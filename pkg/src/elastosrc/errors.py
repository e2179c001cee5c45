"""Exception types shared across the package."""


class ElastosrcError(Exception):
    """Base class for all package errors."""


class DomainError(ElastosrcError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SingularPointError(DomainError):
    """Evaluation requested exactly at a kernel singularity."""


class ResonanceError(ElastosrcError, ValueError):
    """Symbol matrix is singular (frequency on a resonant circle)."""


class ConfigurationError(ElastosrcError, ValueError):
    """Invalid or under-resolved experiment configuration."""


class InputError(ElastosrcError, ValueError):
    """Mismatched or malformed data passed between pipeline stages."""


class SolverError(ElastosrcError, RuntimeError):
    """Discrete linear system is near-singular or the solver failed."""


class ConvergenceError(ElastosrcError, RuntimeError):
    """Iterative procedure hit its iteration cap before converging."""

    def __init__(self, message, residual_trace=None):
        super().__init__(message)
        self.residual_trace = list(residual_trace) if residual_trace is not None else []


class BornDivergenceError(ElastosrcError, RuntimeError):
    """Born decomposition unusable: measured operator norm is >= 1."""
