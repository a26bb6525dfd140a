"""Shared error types for budget limits and deadlines."""


class BudgetExceededError(RuntimeError):
    """A configured resource cap was hit (enumeration, nodes, states, width, bits)."""


class DeadlineExceededError(RuntimeError):
    """A per-stage deadline expired; raised at algorithm loop heads."""


class ParseError(ValueError):
    """Formula text rejected; carries the 0-based offset of the offending token."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position
