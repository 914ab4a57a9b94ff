"""Exception types shared across the package."""


class SimplexMaxError(Exception):
    """Base class for all package errors."""


class BudgetExceeded(SimplexMaxError):
    """An enumeration visited more search nodes than its budget allows.

    Raised instead of returning a truncated count.
    """

    def __init__(self, budget: int, what: str = "enumeration"):
        self.budget = budget
        super().__init__(f"{what} exceeded node budget of {budget}")


class DegenerateBasis(SimplexMaxError):
    """A basis of vectors is linearly dependent where independence is needed."""


class EmptyAverage(SimplexMaxError):
    """No isometric copies exist, so the normalized average is undefined."""


class InvalidInput(SimplexMaxError, ValueError):
    """Malformed or out-of-range user input."""
