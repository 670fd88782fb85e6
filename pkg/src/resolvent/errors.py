"""Exception hierarchy.

Every error raised for a mathematically invalid request derives from
:class:`DomainError`; the CLI maps those to exit status 2.
"""


class DomainError(ValueError):
    """Input is well formed but outside the operation's domain."""


class RootFindingError(DomainError):
    """Simultaneous iteration failed to converge.

    ``best`` holds the last iterate so callers can inspect it.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class NearCriticalPath(DomainError):
    """Continuation step size underflowed close to the discriminant locus."""

    def __init__(self, message, point=None, t=None):
        super().__init__(message)
        self.point = point
        self.t = t


class GroupTooLarge(DomainError):
    pass
