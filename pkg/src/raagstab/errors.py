class InputError(ValueError):
    """Malformed input: unknown vertex, bad word syntax, broken file."""


class HypothesisError(ValueError):
    """The defining graph is not connected and anti-connected with at least two vertices."""


class BudgetExceeded(RuntimeError):
    """An enumeration grew past its configured cap."""
