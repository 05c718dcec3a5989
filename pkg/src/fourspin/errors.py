"""Exception types shared across the package.

Everything numerical that can fail in a well-defined way raises a subclass of
NumericsError, so the CLI can map any of them to a single exit code.
"""


class NumericsError(Exception):
    """Base class for well-defined numerical failures."""


class DegenerateGapError(NumericsError):
    """The quasiparticle gap closes identically (J = 0): Bogoliubov phase undefined."""


class NoGaplessModesError(NumericsError):
    """No real solutions of E_{k,1} = 0: the lower branch does not cross zero."""


class CurvatureUndefinedError(NumericsError):
    """Metric (nearly) degenerate at a stencil point; Ricci scalar undefined."""


class NonConvergenceError(NumericsError):
    """An iterative solver stopped before reaching its tolerance."""

    def __init__(self, message, last_delta=None):
        super().__init__(message)
        self.last_delta = last_delta
