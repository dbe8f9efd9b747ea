"""Exception hierarchy shared by all modules.

Every error raised on purpose by the library derives from ``ExplicitZetaError``
so that callers (and the CLI exit-code mapping) can tell library refusals apart
from programming errors.
"""


class ExplicitZetaError(Exception):
    """Base class for deliberate refusals."""


class DomainError(ExplicitZetaError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class ArgumentError(ExplicitZetaError, ValueError):
    """Malformed or inconsistent argument (tolerances, contexts, ranges)."""


class CapacityError(ExplicitZetaError, ValueError):
    """Request exceeds a table or sieve capacity."""


class BudgetError(ExplicitZetaError, ValueError):
    """Request exceeds a computational budget guard."""


class ConstraintError(ExplicitZetaError, ValueError):
    """A parameter admissibility condition is violated.

    ``condition`` names the violated condition, e.g. ``"b"`` or ``"epsilon"``.
    """

    def __init__(self, condition, message):
        super().__init__(f"condition ({condition}) violated: {message}")
        self.condition = condition


class ToleranceError(ExplicitZetaError, RuntimeError):
    """A numerical procedure failed to reach the requested tolerance."""


class IntegrityError(ExplicitZetaError, RuntimeError):
    """An empirical computation contradicts a certified envelope."""
