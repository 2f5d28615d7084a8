"""Shared exception types."""


class DomainError(ValueError):
    """Input is outside the mathematical domain of an operation."""


class BudgetExceeded(Exception):
    """An exhaustive computation would exceed its configured size budget."""
