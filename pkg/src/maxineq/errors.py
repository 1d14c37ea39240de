"""Semantic exception hierarchy for the workbench."""


class MaxineqError(Exception):
    """Base error for this package."""


class DomainError(MaxineqError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class ModelError(MaxineqError, ValueError):
    """A dependence model violates its construction invariants."""


class SchemeError(MaxineqError, ValueError):
    """A norming scheme violates its parameter constraints."""


class BudgetError(MaxineqError, RuntimeError):
    """An enumeration would exceed the configured outcome budget."""


class ConfigError(MaxineqError, ValueError):
    """A run configuration document is malformed."""
