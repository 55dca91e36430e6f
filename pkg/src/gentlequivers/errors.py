"""Exception types shared across the package."""


class QuiverError(ValueError):
    """Malformed quiver data (unknown vertex or arrow, duplicate id, bad token)."""


class InvariantBreach(RuntimeError):
    """An internal consistency check failed.

    These are never expected on valid input; they signal a bug or an input
    outside the mathematical scope of an algorithm.
    """
