"""Closed-form hyperbolic Kepler orbits: time solver and conic asymptotes.

Used as the comparison dynamics for asymptote extraction, for the
reference-property checks, and as an independent oracle for the numerical
integrator.  Strengths may be attractive (mu > 0) or repulsive (mu < 0);
both give hyperbolic scattering for h > 0, on different conic branches.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import RootFindingError
from .model import PhaseState


def _unit(v: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(v)
    if n == 0:
        raise ValueError("zero vector")
    return v / n


def perp_component(w: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Component of w orthogonal to v."""
    return w - (w @ v) / (v @ v) * v


@dataclass(frozen=True)
class KeplerOrbit:
    """A positive-energy orbit about a fixed center.

    Attributes are the invariant geometric data: energy h, angular momentum
    vector about the center, and the Laplace-Runge-Lenz-style eccentricity
    vector (pointing to pericenter for mu > 0, away from it for mu < 0).
    Time is measured from pericenter passage; mu = 0 degenerates to straight
    lines, with time measured from the stored reference state instead.
    """

    mu: float
    center: np.ndarray
    h: float
    lvec: np.ndarray
    evec: np.ndarray
    q0: np.ndarray | None = None
    p0: np.ndarray | None = None

    @classmethod
    def from_state(cls, state: PhaseState, mu: float, center) -> "KeplerOrbit":
        center = np.asarray(center, dtype=float)
        rel = state.q - center
        r = np.linalg.norm(rel)
        h = 0.5 * float(state.p @ state.p) - mu / r
        if h <= 0:
            raise ValueError(f"orbit is not scattering (h={h:.3g})")
        lvec = np.cross(rel, state.p)
        if mu != 0.0:
            evec = np.cross(state.p, lvec) / mu - rel / r
        else:
            evec = np.zeros(3)
        return cls(mu, center, h, lvec, np.asarray(evec),
                   q0=state.q.copy(), p0=state.p.copy())

    @property
    def ell(self) -> float:
        """Angular momentum magnitude about the center."""
        return float(np.linalg.norm(self.lvec))

    @property
    def eccentricity(self) -> float:
        if self.mu == 0.0:
            return math.inf
        return math.sqrt(1.0 + 2.0 * self.h * self.ell ** 2 / self.mu ** 2)

    @property
    def semi_axis(self) -> float:
        return abs(self.mu) / (2.0 * self.h)

    def _plane(self) -> tuple[np.ndarray, np.ndarray]:
        """Orthonormal in-plane axes (u toward pericenter, v along motion there)."""
        lhat = _unit(self.lvec)
        if self.mu > 0:
            u = _unit(self.evec)
        else:
            u = -_unit(self.evec)  # repulsive: pericenter opposite the e-vector
        v = np.cross(lhat, u)
        return u, v

    def state_at(self, t: float) -> PhaseState:
        """Phase state at time t (t = 0 at pericenter), via the hyperbolic anomaly."""
        if self.mu == 0.0:
            if self.q0 is None:
                raise ValueError("free motion needs a reference state")
            return PhaseState(self.q0 + t * self.p0, self.p0.copy())
        if self.ell == 0.0:
            raise ValueError("degenerate radial orbit")
        aa = self.semi_axis
        e = self.eccentricity
        n = math.sqrt(2.0 * self.h) ** 3 / abs(self.mu)
        hh = solve_hyperbolic_kepler(n * t, e, attractive=self.mu > 0)
        u, v = self._plane()
        if self.mu > 0:
            x = aa * (e - math.cosh(hh))
            r = aa * (e * math.cosh(hh) - 1.0)
            vx_sign = -1.0
        else:
            x = aa * (e + math.cosh(hh))
            r = aa * (e * math.cosh(hh) + 1.0)
            vx_sign = 1.0
        y = aa * math.sqrt(e * e - 1.0) * math.sinh(hh)
        hdot = n * aa / r
        vx = vx_sign * aa * hdot * math.sinh(hh)
        vy = aa * hdot * math.sqrt(e * e - 1.0) * math.cosh(hh)
        q = self.center + x * u + y * v
        p = vx * u + vy * v
        return PhaseState(q, p)

    def time_of(self, state: PhaseState) -> float:
        """Time coordinate of a phase point lying on this orbit."""
        if self.mu == 0.0:
            dq = state.q - self.q0
            return float(dq @ self.p0) / float(self.p0 @ self.p0)
        e = self.eccentricity
        u, v = self._plane()
        y = float((state.q - self.center) @ v)
        hh = math.asinh(y / (self.semi_axis * math.sqrt(e * e - 1.0)))
        n = math.sqrt(2.0 * self.h) ** 3 / abs(self.mu)
        sgn = -1.0 if self.mu > 0 else 1.0
        return (e * math.sinh(hh) + sgn * hh) / n

    def asymptote(self, side: int) -> tuple[np.ndarray, np.ndarray]:
        """Exact asymptotic momentum and impact-parameter vector (about the origin).

        side = +1 for t -> +infinity, -1 for t -> -infinity.  The impact
        parameter combines the center's own transverse offset with the
        conic's offset (angular momentum over momentum norm).
        """
        if self.mu == 0.0:
            if self.q0 is None:
                raise ValueError("free motion needs a reference state")
            return self.p0.copy(), perp_component(self.q0, self.p0)
        e = self.eccentricity
        u, v = self._plane()
        # true-anomaly half-opening: r -> inf at cos(nu) = -1/e (attractive)
        # or cos(nu) = +1/e measured from the -e direction (repulsive).
        cosn = -1.0 / e if self.mu > 0 else 1.0 / e
        sinn = math.sqrt(max(0.0, 1.0 - cosn * cosn))
        speed = math.sqrt(2.0 * self.h)
        # outgoing radial direction at nu -> +nu_inf, incoming at -nu_inf
        d_out = cosn * u + sinn * v
        d_in = cosn * u - sinn * v
        if side >= 0:
            p_hat = speed * d_out
        else:
            p_hat = -speed * d_in
        q_perp = (perp_component(self.center, p_hat)
                  + np.cross(p_hat, self.lvec) / (2.0 * self.h))
        return p_hat, q_perp


def solve_hyperbolic_kepler(m: float, e: float, attractive: bool = True,
                            tol: float = 1e-13, max_iter: int = 80) -> float:
    """Solve M = e sinh(H) - H (attractive) or M = e sinh(H) + H (repulsive).

    Safeguarded Newton: iterates are kept inside a bracketing interval that
    is bisected whenever the Newton step leaves it.
    """
    sgn = -1.0 if attractive else 1.0  # M = e sinh H + sgn_term * H

    def f(x):
        return e * math.sinh(x) + sgn * x - m

    def fp(x):
        return e * math.cosh(x) + sgn

    # initial guess and bracket
    x = math.asinh(m / e)
    lo, hi = x - 1.0, x + 1.0
    while f(lo) > 0:
        lo -= max(1.0, abs(lo))
    while f(hi) < 0:
        hi += max(1.0, abs(hi))
    for _ in range(max_iter):
        fx = f(x)
        if abs(fx) < tol * (1.0 + abs(m)):
            return x
        if fx > 0:
            hi = x
        else:
            lo = x
        step = fx / fp(x)
        x_new = x - step
        if not (lo < x_new < hi):
            x_new = 0.5 * (lo + hi)
        if x_new == x:
            return x
        x = x_new
    if abs(f(x)) < 1e-9 * (1.0 + abs(m)):
        return x
    raise RootFindingError(f"hyperbolic Kepler equation did not converge (M={m}, e={e})")
