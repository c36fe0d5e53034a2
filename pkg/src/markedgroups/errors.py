"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside an operation's domain (bad family, parameter or shape)."""


class ConsistencyError(RuntimeError):
    """Two independent computations of the same object disagree."""


class ContractViolation(RuntimeError):
    """An internal post-condition failed; signals a bug, not bad input."""


class ResourceError(RuntimeError):
    """A configured size cap would be exceeded."""


class BudgetExhausted(RuntimeError):
    """A search ran out of its node budget before finishing."""

    def __init__(self, message, nodes=0, partial=None):
        super().__init__(message)
        self.nodes = nodes
        self.partial = partial
