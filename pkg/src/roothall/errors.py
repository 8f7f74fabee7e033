"""Shared exception types."""


class RootHallError(Exception):
    """Base class for package errors."""


class ConfigError(RootHallError):
    """Invalid user input (bad field size, malformed quiver, bad flags)."""


class BoundExceededError(RootHallError):
    """A computation would need classes outside the configured dimension bound."""


class BudgetExceededError(RootHallError):
    """An enumeration would exceed the configured search budget."""


class InternalCheckError(RootHallError):
    """An internal consistency assertion failed; signals an enumeration bug."""
