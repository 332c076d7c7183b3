"""Problem definition: parameters, phase-space states and invariant triples.

The system is a point particle moving in the field of two fixed centers of
strengths mu1, mu2 placed on the z-axis at (0, 0, -a) and (0, 0, +a).  Three
commuting quantities are conserved: the energy h, the z angular momentum l
and a separation constant g; together they form the invariant triple
(h, l, g) that labels the invariant sets of the flow.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Params:
    """Strengths of the two centers and half the distance between them.

    Either strength may be positive (attractive), negative (repulsive) or
    zero; no ordering between |mu1| and |mu2| is assumed anywhere.
    """

    mu1: float
    mu2: float
    a: float = 1.0

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"half-separation a must be positive, got {self.a}")

    @property
    def center1(self) -> np.ndarray:
        return np.array([0.0, 0.0, -self.a])

    @property
    def center2(self) -> np.ndarray:
        return np.array([0.0, 0.0, self.a])

    @property
    def strength_sum(self) -> float:
        """Combined strength entering the xi separated equation."""
        return self.mu1 + self.mu2

    @property
    def strength_diff(self) -> float:
        """Strength difference entering the eta separated equation."""
        return self.mu1 - self.mu2

    def mirrored(self) -> "Params":
        """Swap the two centers (the z -> -z reflection of the problem)."""
        return Params(self.mu2, self.mu1, self.a)


@dataclass(frozen=True)
class PhaseState:
    """Cartesian position/momentum pair."""

    q: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "q", np.asarray(self.q, dtype=float))
        object.__setattr__(self, "p", np.asarray(self.p, dtype=float))
        if self.q.shape != (3,) or self.p.shape != (3,):
            raise ValueError("q and p must be 3-vectors")

    def radii(self, params: Params) -> tuple[float, float]:
        """Distances to the two centers."""
        x, y, z = self.q
        rho2 = x * x + y * y
        r1 = math.sqrt(rho2 + (z + params.a) ** 2)
        r2 = math.sqrt(rho2 + (z - params.a) ** 2)
        return r1, r2


@dataclass(frozen=True)
class ProlateState:
    """State in prolate ellipsoidal coordinates (xi, eta, phi).

    xi = (r1 + r2) / 2a >= 1,  eta = (r1 - r2) / 2a in [-1, 1],
    phi the azimuth about the z-axis.  p_phi equals the z angular momentum.
    """

    xi: float
    eta: float
    phi: float
    p_xi: float
    p_eta: float
    p_phi: float


@dataclass(frozen=True)
class InvariantPoint:
    """A value (h, l, g) of the map built from the three first integrals."""

    h: float
    l: float
    g: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.h, self.l, self.g)


class TerminationReason(enum.Enum):
    TIME_LIMIT = "time-limit"
    RADIUS_REACHED = "radius-reached"
    COLLISION = "collision"


@dataclass
class Trajectory:
    """Integrated orbit samples plus integration metadata.

    ``states`` has one row per accepted step: (t, x, y, z, px, py, pz, phi)
    where phi is the unwrapped azimuth accumulated along the orbit.
    """

    states: np.ndarray
    reason: TerminationReason
    rtol: float
    atol: float
    nsteps: int
    params: Params = field(repr=False, default=None)

    @property
    def times(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def positions(self) -> np.ndarray:
        return self.states[:, 1:4]

    @property
    def momenta(self) -> np.ndarray:
        return self.states[:, 4:7]

    @property
    def phi(self) -> np.ndarray:
        return self.states[:, 7]

    def final_state(self) -> PhaseState:
        row = self.states[-1]
        return PhaseState(row[1:4].copy(), row[4:7].copy())


class ReferenceChoice(enum.Enum):
    """Which comparison system the regularized xi-action is taken against.

    KEPLER_AT_O1: single center of strength mu1 - mu2 at (0, 0, -a).
    KEPLER_AT_O2: single center of strength mu2 - mu1 at (0, 0, +a).
    SELF: the original Hamiltonian compared against itself.
    """

    KEPLER_AT_O1 = "o1"
    KEPLER_AT_O2 = "o2"
    SELF = "self"

    def kepler_strength(self, params: Params) -> float:
        """Strength of the comparison Kepler center (0 convention for SELF)."""
        if self is ReferenceChoice.KEPLER_AT_O1:
            return params.mu1 - params.mu2
        if self is ReferenceChoice.KEPLER_AT_O2:
            return params.mu2 - params.mu1
        return 0.0

    def reference_params(self, params: Params) -> Params:
        """The comparison system expressed as a (possibly degenerate) two-center problem."""
        if self is ReferenceChoice.KEPLER_AT_O1:
            return Params(params.mu1 - params.mu2, 0.0, params.a)
        if self is ReferenceChoice.KEPLER_AT_O2:
            return Params(0.0, params.mu2 - params.mu1, params.a)
        return params
