"""Exception hierarchy shared by all modules."""


class CasimirError(Exception):
    """Base class for errors raised by casimir_lab."""


class NonConvergence(CasimirError):
    """A quadrature, series or sum did not reach its tolerance.

    ``estimate`` and ``error`` carry the best value obtained and its error bound;
    ``node`` optionally records where (l, k, T) the failure happened.
    """

    def __init__(self, message, estimate=None, error=None, node=None):
        if node:
            message = f"{message} at {node}"
        super().__init__(message)
        self.estimate = estimate
        self.error = error
        self.node = node


class DomainError(CasimirError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class CaseError(DomainError):
    """Formula requested outside the parameter case it is valid for."""


class StepUnderflow(CasimirError):
    """Finite-difference step fell below the parameter resolution."""


class DegenerateData(CasimirError, ValueError):
    """Data cannot support the requested fit."""


class SeriesOutOfRange(DomainError):
    """Asymptotic series evaluated outside its range of validity."""


class UnsupportedProvider(CasimirError, TypeError):
    """Reflection provider lacks a capability the caller needs."""


class ConfigError(CasimirError, ValueError):
    """Invalid or incomplete run configuration."""


class WindowViolation(UserWarning):
    """Scan temperature lies outside the small-parameter window of its case."""
