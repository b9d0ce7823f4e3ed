"""Exception types shared across the toolkit."""


class RBKitError(Exception):
    """Base class for all toolkit errors."""


class BoundaryPoint(RBKitError):
    """A point has last coordinate <= 0, where the half-space metric is singular."""


class DimensionMismatch(RBKitError):
    """Operands live in different ambient dimensions."""


class GradeOverflow(RBKitError):
    """A wedge power was requested whose grade exceeds the ambient dimension."""


class IndexOutOfRange(RBKitError):
    """Generator index outside 1..n-1."""


class OddSize(RBKitError):
    """Contact machinery needs an odd ambient dimension (even matrix size)."""


class NotClosed(RBKitError):
    """A bracket left the span; structure constants are undefined."""


class DegeneratePoint(RBKitError):
    """The dual form annihilates the field at this point; no splitting exists."""


class NonFinite(RBKitError):
    """A numeric trajectory produced NaN or infinity."""


class ParseError(RBKitError):
    """A parameter file is malformed; message carries the field or line."""


class BoundaryEscape(RBKitError):
    """A numeric flow left the safe region of the half-space.

    Carries the valid prefix of the trajectory in ``trajectory`` (the last
    element is the last valid state).
    """

    def __init__(self, message, trajectory=()):
        super().__init__(message)
        self.trajectory = list(trajectory)

    @property
    def last_state(self):
        return self.trajectory[-1] if self.trajectory else None
