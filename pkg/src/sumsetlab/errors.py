"""Shared exception types."""


class CapExceededError(ValueError):
    """An enumeration, materialization or verification exceeds its configured cap."""


class GroupMismatchError(ValueError):
    """Operands live on different groups."""


class HypothesisError(ValueError):
    """A mathematical hypothesis of the requested operation is violated."""
