"""Exception hierarchy for the twocenter package."""


class TwoCenterError(Exception):
    """Base class for all package errors."""


class CollisionProximityError(TwoCenterError):
    """A phase-space state is too close to one of the fixed centers."""


class AxisDegeneracyError(TwoCenterError):
    """Prolate momenta requested on the z-axis, where phi is undefined."""


class NonPhysicalError(TwoCenterError):
    """An invariant triple (h, l, g) admits no classical motion."""


class RootFindingError(TwoCenterError):
    """Polynomial or scalar root finding failed to converge."""


class DegenerateIntervalError(TwoCenterError):
    """A turning-point interval collapsed (the value lies on the critical set)."""


class CutoffError(TwoCenterError):
    """Regularization cutoff placed inside the classically forbidden region."""


class ExtrapolationError(TwoCenterError):
    """Richardson extrapolation of a limit did not converge.

    Carries the raw derivative sequence for diagnosis.
    """

    def __init__(self, message, sequence=None):
        super().__init__(message)
        self.sequence = tuple(sequence) if sequence is not None else ()


class LoopGeometryError(TwoCenterError):
    """A monodromy loop is malformed (wrong crossings, hits critical set)."""


class UnreliableResultError(TwoCenterError):
    """A computed invariant failed its internal residual check."""


class TrappedTrajectoryError(TwoCenterError):
    """A trajectory failed to escape within the allotted time."""


class ConfigError(TwoCenterError):
    """Invalid CLI/file configuration."""
