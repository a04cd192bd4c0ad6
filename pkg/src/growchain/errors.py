"""Exception hierarchy shared by the engines and the CLI."""


class GrowchainError(Exception):
    """Base class for all package errors."""


class ParameterError(GrowchainError, ValueError):
    """Model parameters outside the builder's schema."""


class DomainError(GrowchainError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class ModelError(GrowchainError):
    """A step rate evaluated to something that is not a probability."""

    def __init__(self, message, t=None, k=None):
        super().__init__(message)
        self.t = t
        self.k = k


class ConvergenceError(GrowchainError):
    """t * f_t(k) failed the convergence certificate."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals or {}


class SimulationError(GrowchainError):
    """A stochastic growth run could not complete."""

    def __init__(self, message, trial=None):
        super().__init__(message)
        self.trial = trial
