"""Exception hierarchy shared by all planners."""


class PlanningError(Exception):
    """Base class for every error raised by this package."""


class DomainError(PlanningError, ValueError):
    """An input violates a documented precondition (bad geometry, power, range)."""


class InfeasibleError(PlanningError):
    """The requested SIR target cannot be met; the message names the violated cap."""


class SchemaError(PlanningError, ValueError):
    """A scenario file does not conform to the expected schema."""


class NumericError(PlanningError, ArithmeticError):
    """A numerical routine failed to converge or produced an invalid value."""
