"""Exception types raised by the package."""


class GSOError(Exception):
    """Base class for domain errors."""


class DimensionError(GSOError, ValueError):
    """Matrix or vector dimensions do not fit together."""


class InvalidChannel(GSOError, ValueError):
    """A channel violates complete positivity or its structural invariants."""


class InvalidState(GSOError, ValueError):
    """A covariance matrix violates the uncertainty relation."""


class NoFiniteFixedPoint(GSOError):
    """Iterating the channel cannot push squeezing below any finite level.

    Raised when ``X.T @ X - 1`` has no negative direction relative to the
    noise, i.e. ``f(s) >= s`` for every ``s``. Amplifiers and the identity
    channel are the typical cases; this is a legitimate outcome, not a bug.
    """


class SingularNoise(GSOError):
    """The noise term ``Y`` is (numerically) singular, so the fixed point formula fails."""


class DegenerateContraction(GSOError):
    """The ring-cavity contraction factor equals one (no noise along the optimum).

    The passive operation, contraction factor, fixed point and optimal
    direction are still attached so callers can inspect them.
    """

    def __init__(self, message, K=None, alpha=None, s_inf=None, psi=None):
        super().__init__(message)
        self.K = K
        self.alpha = alpha
        self.s_inf = s_inf
        self.psi = psi


class SingularDenominator(GSOError):
    """``B + gamma`` is numerically singular in a general Gaussian operation."""
