"""Exception types shared across the library."""


class DomainBoundError(ValueError):
    """Input lies outside the validity domain of a transformation or formula.

    The most common case is a cylindrical radius at or beyond the co-rotation
    bound r*Omega >= 1 (physically r > lambda/2pi), where the rotating-frame
    map degenerates.
    """


class ConvergenceError(RuntimeError):
    """An iterative numerical procedure failed to reach its tolerance.

    Carries the last two successive estimates so callers can judge how far
    the iteration got.
    """

    def __init__(self, message, last_estimates=None):
        super().__init__(message)
        self.last_estimates = last_estimates


class DegenerateStateError(ValueError):
    """A state or parameter combination is degenerate (e.g. vanishing spinor)."""


class SignConventionError(ValueError):
    """Inputs violate the positive-resonance-parameter sign convention."""
