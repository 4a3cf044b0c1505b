class DesignError(ValueError):
    """Invalid input to a construction or design test."""


class BudgetExceeded(RuntimeError):
    """An exhaustive enumeration ran past its iteration budget."""

    def __init__(self, message, used=None):
        super().__init__(message)
        self.used = used
