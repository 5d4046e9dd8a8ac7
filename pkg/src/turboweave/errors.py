"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An input violates a structural precondition (bad permutation, bad graph, bad vector)."""


class ResourceLimitError(RuntimeError):
    """A requested computation exceeds its configured size budget."""


class ConstructionError(RuntimeError):
    """A randomized construction failed within its retry budget."""
