"""Exceptions shared across the package."""


class HypothesisError(ValueError):
    """A theorem-backed construction was asked to run outside its hypotheses."""


class BudgetExceededError(RuntimeError):
    """A bounded search ran out of budget; the outcome is inconclusive, not negative."""
