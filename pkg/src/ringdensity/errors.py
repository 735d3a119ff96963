"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class BudgetExceeded(RuntimeError):
    """A computation would exceed its configured work budget.

    ``required`` is the budget that would let the computation run.
    """

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class ConsistencyError(RuntimeError):
    """Two independent evaluations of the same quantity disagree."""
