"""Exception hierarchy shared by all modules."""


class BakhvalovError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(BakhvalovError, ValueError):
    """Invalid user input: parameters, study configuration, mesh sizes."""


class EvaluationError(BakhvalovError, ArithmeticError):
    """A coefficient, integrand or nodal value evaluated to a non-finite number."""


class SolverError(BakhvalovError, ArithmeticError):
    """Linear solve breakdown, e.g. a zero pivot in the Thomas algorithm."""


class UndefinedRateError(BakhvalovError, ValueError):
    """Convergence rate requested from a non-positive error."""
