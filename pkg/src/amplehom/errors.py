"""Shared exception types, mapped onto CLI exit codes."""


class SpecError(ValueError):
    """Malformed or invariant-violating input (CLI exit code 2)."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class ComputationRefused(RuntimeError):
    """A computation the tool declines to run (CLI exit code 1)."""


class BudgetExceeded(ComputationRefused):
    """Brute-force computation would exceed the memory budget."""

    def __init__(self, required: int, budget: int):
        self.required = required
        self.budget = budget
        super().__init__(
            f"computation needs about {required} bytes, budget is {budget};"
            " raise --memory-budget to proceed"
        )


class HypothesisNotMet(ComputationRefused):
    """A hard hypothesis required by group arithmetic fails."""
