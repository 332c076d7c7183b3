"""First integrals, coordinate transforms, separated momenta and orbit integration.

Geometry: centers of strength mu1, mu2 sit at (0, 0, -a) and (0, 0, +a).
The three commuting integrals are

    H = |p|^2/2 - mu1/r1 - mu2/r2,
    L = x p_y - y p_x,
    G = H + (L_vec^2 - a^2 (p_x^2 + p_y^2))/2 + a (z+a) mu1/r1 - a (z-a) mu2/r2,

where L_vec is the full angular momentum vector about the origin.  In prolate
coordinates xi = (r1+r2)/2a, eta = (r1-r2)/2a the Hamiltonian separates, and
on a level set (h, l, g) the squared momenta reduce to a shared quartic
numerator (see ``separated_momentum_sq``).
"""
from __future__ import annotations

import math

import numpy as np

from . import kernels, quartic
from .errors import AxisDegeneracyError, CollisionProximityError, NonPhysicalError
from .kernels import models
from .model import InvariantPoint, Params, PhaseState, ProlateState, TerminationReason, Trajectory

#: states with min(r1, r2) below this (times a) raise / terminate as collisions
COLLISION_EPS_FACTOR = 1e-6

#: rho^2 below this (times a^2) counts as "on the z-axis"
AXIS_EPS = 1e-24

DEFAULT_TOL = 1e-10


def _check_not_colliding(s: PhaseState, params: Params, eps_factor: float = COLLISION_EPS_FACTOR):
    r1, r2 = s.radii(params)
    if min(r1, r2) < eps_factor * params.a:
        raise CollisionProximityError(
            f"state within {eps_factor:g}*a of a center (r1={r1:.3e}, r2={r2:.3e})")
    return r1, r2


def eval_integrals(s: PhaseState, params: Params) -> InvariantPoint:
    """Evaluate (h, l, g) by the closed-form expressions."""
    r1, r2 = _check_not_colliding(s, params)
    q, p = s.q, s.p
    a = params.a
    h = 0.5 * float(p @ p) - params.mu1 / r1 - params.mu2 / r2
    lvec = np.cross(q, p)
    l = float(lvec[2])
    g = (h + 0.5 * (float(lvec @ lvec) - a * a * (p[0] ** 2 + p[1] ** 2))
         + a * (q[2] + a) * params.mu1 / r1 - a * (q[2] - a) * params.mu2 / r2)
    return InvariantPoint(h, l, float(g))


def equations_of_motion(s: PhaseState, params: Params) -> tuple[np.ndarray, np.ndarray]:
    """Phase velocity (dq/dt, dp/dt) = (p, -grad V)."""
    r1, r2 = _check_not_colliding(s, params)
    d1 = s.q - params.center1
    d2 = s.q - params.center2
    dp = -params.mu1 * d1 / r1 ** 3 - params.mu2 * d2 / r2 ** 3
    return s.p.copy(), dp


def potential(q: np.ndarray, params: Params) -> float:
    x, y, z = q
    rho2 = x * x + y * y
    r1 = math.sqrt(rho2 + (z + params.a) ** 2)
    r2 = math.sqrt(rho2 + (z - params.a) ** 2)
    return -params.mu1 / r1 - params.mu2 / r2


def prolate_coordinates(q: np.ndarray, params: Params) -> tuple[float, float, float]:
    """Position-only prolate coordinates (xi, eta, phi); valid on the axis too."""
    x, y, z = q
    rho2 = x * x + y * y
    r1 = math.sqrt(rho2 + (z + params.a) ** 2)
    r2 = math.sqrt(rho2 + (z - params.a) ** 2)
    return ((r1 + r2) / (2 * params.a), (r1 - r2) / (2 * params.a),
            math.atan2(y, x))


def cartesian_to_prolate(s: PhaseState, params: Params) -> ProlateState:
    """Positions via the defining radii combinations; momenta via the cotangent lift."""
    r1, r2 = _check_not_colliding(s, params)
    a = params.a
    x, y, z = s.q
    rho2 = x * x + y * y
    if rho2 < AXIS_EPS * a * a:
        raise AxisDegeneracyError("prolate momenta are undefined on the z-axis")
    xi = (r1 + r2) / (2 * a)
    eta = (r1 - r2) / (2 * a)
    phi = math.atan2(y, x)
    # gradients of (xi, eta, phi) as rows; p_prolate solves p = J^T p_prolate
    u1 = (s.q - params.center1) / r1
    u2 = (s.q - params.center2) / r2
    grad_xi = (u1 + u2) / (2 * a)
    grad_eta = (u1 - u2) / (2 * a)
    grad_phi = np.array([-y / rho2, x / rho2, 0.0])
    jac = np.column_stack([grad_xi, grad_eta, grad_phi])
    p_xi, p_eta, p_phi = np.linalg.solve(jac, s.p)
    return ProlateState(xi, eta, phi, float(p_xi), float(p_eta), float(p_phi))


def prolate_to_cartesian(ps: ProlateState, params: Params) -> PhaseState:
    """Inverse transform, including momenta (p = p_xi grad xi + ...)."""
    a = params.a
    xi, eta, phi = ps.xi, ps.eta, ps.phi
    rho = a * math.sqrt(max(xi * xi - 1.0, 0.0) * max(1.0 - eta * eta, 0.0))
    q = np.array([rho * math.cos(phi), rho * math.sin(phi), a * xi * eta])
    if rho * rho < AXIS_EPS * a * a:
        raise AxisDegeneracyError("prolate momenta are undefined on the z-axis")
    r1 = a * (xi + eta)
    r2 = a * (xi - eta)
    u1 = (q - params.center1) / r1
    u2 = (q - params.center2) / r2
    grad_xi = (u1 + u2) / (2 * a)
    grad_eta = (u1 - u2) / (2 * a)
    grad_phi = np.array([-q[1] / (rho * rho), q[0] / (rho * rho), 0.0])
    p = ps.p_xi * grad_xi + ps.p_eta * grad_eta + ps.p_phi * grad_phi
    return PhaseState(q, p)


def separated_momentum_sq(kind: str, v: float, f: InvariantPoint,
                          strengths: tuple[float, float] | Params) -> float:
    """Squared separated momentum at coordinate value v on the level set f.

    kind "xi" uses the first strength (mu1 + mu2 for the original problem),
    kind "eta" the second (mu1 - mu2).  Callers may substitute the strengths
    of a comparison system.  A negative return value flags classically
    forbidden coordinates.
    """
    if isinstance(strengths, Params):
        strengths = (strengths.strength_sum, strengths.strength_diff)
    s_plus, s_minus = strengths
    if kind == "xi":
        if v <= 1.0:
            if f.l != 0.0 or v < 1.0:
                raise ValueError(f"xi must exceed 1, got {v}")
        denom = (v * v - 1.0) ** 2
        s = s_plus
    elif kind == "eta":
        if abs(v) >= 1.0:
            if f.l != 0.0 or abs(v) > 1.0:
                raise ValueError(f"eta must lie strictly inside (-1, 1), got {v}")
        denom = (1.0 - v * v) ** 2
        s = s_minus
    else:
        raise ValueError(f"kind must be 'xi' or 'eta', got {kind!r}")
    if denom == 0.0:
        raise ValueError(f"pole of the separated momentum at {kind}={v} with l != 0")
    num = quartic.eval_poly(quartic.momentum_numerator_coeffs(f.h, f.g, f.l, s), v)
    return float(num) / denom


def hamiltonian_prolate(ps: ProlateState, params: Params) -> float:
    """Energy from the separated form (H_xi + H_eta) / (xi^2 - eta^2)."""
    a2 = params.a ** 2
    xi, eta, l = ps.xi, ps.eta, ps.p_phi
    h_xi = ((xi * xi - 1) * ps.p_xi ** 2 / (2 * a2)
            + l * l / (2 * a2 * (xi * xi - 1))
            - params.strength_sum * xi / params.a)
    h_eta = ((1 - eta * eta) * ps.p_eta ** 2 / (2 * a2)
             + l * l / (2 * a2 * (1 - eta * eta))
             + params.strength_diff * eta / params.a)
    return (h_xi + h_eta) / (xi * xi - eta * eta)


def integrate(s0: PhaseState, params: Params, t_max: float = 1e6,
              r_max: float = 1e4, tol: float = DEFAULT_TOL,
              collision_eps: float | None = None, record: bool = True,
              max_steps: int = 2_000_000) -> Trajectory:
    """Adaptive integration until the time limit, escape radius or collision.

    ``tol`` is the conservation target for (h, l, g) along the run; the
    stepper's local error control runs three orders tighter, which keeps the
    measured drift of the integrals below ~10*tol (local tolerances do not
    bound accumulated error for an embedded 5(4) pair).

    The returned samples carry the unwrapped azimuth as an extra column
    (integrated alongside the flow), which downstream deflection-angle code
    consumes.
    """
    if collision_eps is None:
        collision_eps = COLLISION_EPS_FACTOR * params.a
    _check_not_colliding(s0, params, collision_eps / params.a)
    y0 = np.concatenate([s0.q, s0.p, [0.0]])
    prm = np.array([params.mu1, params.mu2, params.a])
    status, t, y, naccept, rec = kernels.propagate(
        models.TWO_CENTER_3D, prm, y0, t_max, r_max,
        rtol=tol * 1e-3, atol=tol * 1e-5, collision_eps=collision_eps,
        max_steps=max_steps, record=record)
    reason = {
        models.STATUS_TIME_LIMIT: TerminationReason.TIME_LIMIT,
        models.STATUS_RADIUS: TerminationReason.RADIUS_REACHED,
        models.STATUS_COLLISION: TerminationReason.COLLISION,
        models.STATUS_MAX_STEPS: TerminationReason.TIME_LIMIT,
    }[status]
    if rec is None:
        rec = np.array([np.concatenate([[0.0], y0]), np.concatenate([[t], y])])
    return Trajectory(states=rec, reason=reason, rtol=tol, atol=tol * 1e-5,
                      nsteps=naccept, params=params)


def fiber_state(f: InvariantPoint, params: Params, xi0: float,
                eta_frac: float = 0.5, phi0: float = 0.0,
                incoming: bool = True, p_eta_sign: float = 1.0) -> PhaseState:
    """A phase point on the level set (h, l, g), placed at prolate xi = xi0.

    eta sits at ``eta_frac`` of the way through its allowed interval and the
    xi momentum points inward when ``incoming``.  The choices vary smoothly
    with f away from the critical set, which keeps families of constructed
    states continuous along parameter loops.
    """
    from . import quartic

    s_plus, s_minus = params.strength_sum, params.strength_diff
    ceta = quartic.momentum_numerator_coeffs(f.h, f.g, f.l, s_minus)
    ivs = quartic.positivity_intervals(ceta, -1.0, 1.0)
    if not ivs:
        raise NonPhysicalError(f"no eta motion at {f}")
    lo, hi = ivs[0]
    eta0 = lo + eta_frac * (hi - lo)
    num_eta = quartic.eval_poly(ceta, eta0)
    p_eta = p_eta_sign * math.sqrt(max(num_eta, 0.0)) / (1.0 - eta0 * eta0)
    cxi = quartic.momentum_numerator_coeffs(f.h, f.g, f.l, s_plus)
    num_xi = quartic.eval_poly(cxi, xi0)
    if num_xi < 0.0:
        raise NonPhysicalError(f"xi0={xi0} is classically forbidden at {f}")
    p_xi = math.sqrt(num_xi) / (xi0 * xi0 - 1.0)
    if incoming:
        p_xi = -p_xi
    ps = ProlateState(xi0, eta0, phi0, p_xi, p_eta, f.l)
    return prolate_to_cartesian(ps, params)


def conservation_drift(traj: Trajectory) -> float:
    """Max relative drift of (h, l, g) over the trajectory samples."""
    params = traj.params
    f0 = None
    worst = 0.0
    for row in traj.states:
        s = PhaseState(row[1:4], row[4:7])
        f = eval_integrals(s, params)
        if f0 is None:
            f0 = f
            scale = np.maximum(np.abs(np.array(f0.as_tuple())), 1.0)
            continue
        d = np.abs(np.array(f.as_tuple()) - np.array(f0.as_tuple())) / scale
        worst = max(worst, float(d.max()))
    return worst
