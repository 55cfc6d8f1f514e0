"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested function."""


class ConvergenceError(RuntimeError):
    """An iterative procedure hit its budget before meeting its tolerance."""


class DegenerateDataError(ValueError):
    """The sample cannot support the requested fit."""
