"""Exception types shared across the package."""


class CyclodynError(Exception):
    """Base class for all package-specific errors."""


class InvalidPlace(CyclodynError, ValueError):
    """A p-adic valuation was requested at a non-prime place."""


class TreeBudgetExceeded(CyclodynError):
    """An orbit-tree expansion exceeded its configured node budget."""

    def __init__(self, message, nodes=None):
        super().__init__(message)
        self.nodes = nodes


class HypothesisNotMet(CyclodynError):
    """A growth-lemma hypothesis could not be certified for the given input."""


class DegenerateCombination(CyclodynError):
    """A linear combination produced the identically-zero difference polynomial."""


class ScalingOutsideSearchSpace(CyclodynError):
    """A required scaling constant lies outside the bounded conductor search space."""


class PrecisionExhausted(CyclodynError):
    """Interval refinement hit its budget without resolving a strict inequality."""
