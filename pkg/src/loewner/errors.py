"""Exception hierarchy.

Validation failures raise :class:`ArgumentError` (a ``ValueError``), numerical
failures raise subclasses of :class:`NumericalError`.  The command line tool
maps the former to exit code 2 and the latter to exit code 3.
"""


class LoewnerError(Exception):
    """Base class for everything raised on purpose by this package."""


class ArgumentError(LoewnerError, ValueError):
    """A precondition on the inputs does not hold."""


class DrivingError(ArgumentError):
    """A driving term is malformed or used outside its domain."""


class NumericalError(LoewnerError):
    """Base class for runtime numerical failures."""


class IntegrationError(NumericalError):
    """The adaptive integrator could not meet its tolerance."""


class ConvergenceError(NumericalError):
    """An iterative procedure ran out of budget before converging."""


class BranchError(NumericalError):
    """A square-root branch collision: the point entered the hull."""


class SwallowedError(NumericalError):
    """A flow reached its singularity before the requested horizon."""

    def __init__(self, time: float, message: str | None = None):
        self.time = time
        super().__init__(message or f"point swallowed at t = {time:.12g}")


class DecompositionError(NumericalError):
    """No admissible Denjoy-Wolff point was found for a vector field."""

    def __init__(self, message: str, best_tau: complex | None = None,
                 violation: float | None = None):
        self.best_tau = best_tau
        self.violation = violation
        super().__init__(message)
