"""Turning points, action integrals and their one-sided l -> 0 derivatives.

The oscillation action for the eta coordinate is

    I_eta(h, l, g) = (1/pi) * integral of |p_eta| over the allowed interval,

and the xi direction, whose plain action diverges for scattering motion,
carries a regularized version: the xi integrand is cut off by a smooth bump
(1 - chi) beyond a radius-like parameter R and compared against the same
integral for a Kepler system, giving

    I_xi_mod = I_xi[comparison strength] - I_xi[mu1 + mu2].

Comparison strengths (calibration note). The glued xi-cycle traverses the
reference arm with reversed orientation, and the comparison strength for the
Kepler system at center o2 enters as mu1 - mu2 (at o1 as mu2 - mu1).  This
sign/strength pairing is pinned by requiring the attractive case
0 < mu2 < mu1 to reproduce the known integer monodromy matrices together
with the half-integer one-sided limits (0 or +-1/2) of d(I_xi_mod)/dl, and
is frozen here; flipping either the orientation or the strength breaks both.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import quartic
from .bifurcation import classify
from .errors import (CutoffError, DegenerateIntervalError, ExtrapolationError,
                     NonPhysicalError)
from .model import InvariantPoint, Params, ReferenceChoice
from .quadrature import adaptive_gauss, smooth_bump

#: quadrature target for single action evaluations
QUAD_TOL = 1e-11

#: default epsilon for the l -> 0+ derivative sequence {eps, 2 eps, 4 eps}
DL_EPS = 1e-4

#: successive Richardson extrapolants must agree to this
DL_CONVERGENCE = 1e-3


def comparison_strength(ref: ReferenceChoice, params: Params) -> float:
    """Strength entering the comparison arm of the regularized xi-action."""
    if ref is ReferenceChoice.KEPLER_AT_O2:
        return params.strength_diff          # mu1 - mu2
    if ref is ReferenceChoice.KEPLER_AT_O1:
        return -params.strength_diff         # mu2 - mu1, by the z -> -z mirror
    return params.strength_sum


def default_cutoff(f: InvariantPoint, params: Params,
                   ref: ReferenceChoice = ReferenceChoice.SELF) -> float:
    """R placed at 10 * max(1, xi_min) over both strengths involved."""
    xs = [1.0]
    for s in {params.strength_sum, comparison_strength(ref, params)}:
        xs.append(_xi_min(f, s))
    return 10.0 * max(xs)


@dataclass(frozen=True)
class ActionValue:
    value: float
    error: float


@dataclass(frozen=True)
class ActionTriple:
    """The angular action (= l), the eta action and the regularized xi action."""

    i_phi: float
    i_eta: ActionValue
    i_xi_mod: ActionValue
    reference: ReferenceChoice
    cutoff: float


def turning_points(kind: str, f: InvariantPoint,
                   strengths: tuple[float, float] | Params):
    """Roots of the separated quartic bounding the classical motion.

    kind "eta": the librational interval (eta_minus, eta_plus) in (-1, 1);
    kind "xi": xi_min, the largest quartic root in (1, inf) (the momentum is
    positive beyond it whenever h > 0).
    """
    if isinstance(strengths, Params):
        strengths = (strengths.strength_sum, strengths.strength_diff)
    s_plus, s_minus = strengths
    if kind == "eta":
        c = quartic.momentum_numerator_coeffs(f.h, f.g, f.l, s_minus)
        quartic.check_root_residual(c, quartic.roots_in(c, -1.0, 1.0))
        if quartic.has_double_root(c, -1.0, 1.0):
            raise DegenerateIntervalError(
                "eta turning points merge: value lies on the critical set")
        ivs = quartic.positivity_intervals(c, -1.0, 1.0)
        if not ivs:
            raise NonPhysicalError(f"no eta motion at {f}")
        if len(ivs) > 1:
            raise DegenerateIntervalError(
                f"eta motion splits into {len(ivs)} intervals; not librational")
        return ivs[0]
    if kind == "xi":
        c = quartic.momentum_numerator_coeffs(f.h, f.g, f.l, s_plus)
        quartic.check_root_residual(c, quartic.roots_in(c, 1.0, np.inf))
        if quartic.has_double_root(c, 1.0, np.inf):
            raise DegenerateIntervalError(
                "xi turning points merge: value lies on the critical set")
        return _xi_min(f, s_plus)
    raise ValueError(f"kind must be 'xi' or 'eta', got {kind!r}")


def _xi_min(f: InvariantPoint, s_plus: float) -> float:
    c = quartic.momentum_numerator_coeffs(f.h, f.g, f.l, s_plus)
    rr = quartic.roots_in(c, 1.0, np.inf)
    if rr.size == 0:
        if quartic.eval_poly(c, 2.0) <= 0 and quartic.eval_poly(c, 100.0) <= 0:
            raise NonPhysicalError(f"no xi motion at {f}")
        return 1.0  # motion extends down to the coordinate boundary (l = 0)
    x = float(rr[-1])
    probe = x + max(1e-9, 1e-9 * x)
    if quartic.eval_poly(c, probe) < 0 and f.h > 0:
        raise NonPhysicalError(f"xi momentum negative beyond the last root at {f}")
    return x


def action_eta(f: InvariantPoint, params: Params,
               tol: float = QUAD_TOL) -> ActionValue:
    """Oscillation action of the eta motion, (1/pi) * int sqrt(p_eta^2).

    The square-root turning points are absorbed by the substitution
    eta = mid + halfwidth * sin(theta); panels refine adaptively, which
    resolves the near-axis boundary layer that appears for small l.
    """
    lo, hi = turning_points("eta", f, params)
    c = quartic.momentum_numerator_coeffs(f.h, f.g, f.l, params.strength_diff)
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)

    def integrand(theta):
        x = mid + half * np.sin(theta)
        num = np.maximum(np.polyval(c, x), 0.0)
        return np.sqrt(num) / (1.0 - x * x) * half * np.cos(theta)

    val, err = adaptive_gauss(integrand, -0.5 * math.pi, 0.5 * math.pi, tol=tol)
    return ActionValue(val / math.pi, err / math.pi)


def _action_xi_one_sided(f: InvariantPoint, s_plus: float, cutoff: float,
                         tol: float = QUAD_TOL) -> ActionValue:
    """(1/pi) * int_{xi_min}^{inf} (1 - chi) |p_xi| with chi rising on [R, R+1]."""
    x0 = _xi_min(f, s_plus)
    if cutoff <= x0:
        raise CutoffError(f"cutoff R={cutoff} inside the forbidden region (xi_min={x0})")
    c = quartic.momentum_numerator_coeffs(f.h, f.g, f.l, s_plus)
    # deflate by the turning point so N/(xi - x0) stays finite at the root
    c_defl, _rem = np.polydiv(c, np.array([1.0, -x0]))

    def head(u):  # xi = x0 + u^2 removes the sqrt at the turning point
        xi = x0 + u * u
        s_val = np.maximum(np.polyval(c_defl, xi), 0.0)
        return 2.0 * u * u * np.sqrt(s_val) / (xi * xi - 1.0)

    v1, e1 = adaptive_gauss(head, 0.0, 1.0, tol=tol)

    def tail(xi):
        num = np.maximum(np.polyval(c, xi), 0.0)
        return (1.0 - smooth_bump(xi, cutoff, cutoff + 1.0)) * np.sqrt(num) / (xi * xi - 1.0)

    v2, e2 = adaptive_gauss(tail, x0 + 1.0, cutoff + 1.0, tol=tol)
    return ActionValue((v1 + v2) / math.pi, (e1 + e2) / math.pi)


def action_xi_mod(f: InvariantPoint, params: Params, ref: ReferenceChoice,
                  cutoff: float | None = None, tol: float = QUAD_TOL) -> ActionValue:
    """Regularized xi-action relative to the chosen comparison system.

    Identically zero for ReferenceChoice.SELF (the two arms coincide).  Both
    arms share one cutoff bump; the value is finite for any scattering
    (h > 0, physical) invariant point.
    """
    if f.h <= 0:
        raise NonPhysicalError(f"regularized xi-action needs h > 0, got h={f.h}")
    if not classify(f, params).physical:
        raise NonPhysicalError(f"{f} admits no motion")
    if cutoff is None:
        cutoff = default_cutoff(f, params, ref)
    if ref is ReferenceChoice.SELF:
        return ActionValue(0.0, 0.0)
    s_cmp = comparison_strength(ref, params)
    arm_cmp = _action_xi_one_sided(f, s_cmp, cutoff, tol)
    arm_orig = _action_xi_one_sided(f, params.strength_sum, cutoff, tol)
    return ActionValue(arm_cmp.value - arm_orig.value, arm_cmp.error + arm_orig.error)


def action_triple(f: InvariantPoint, params: Params, ref: ReferenceChoice,
                  cutoff: float | None = None) -> ActionTriple:
    if cutoff is None:
        cutoff = default_cutoff(f, params, ref)
    return ActionTriple(
        i_phi=f.l,
        i_eta=action_eta(f, params),
        i_xi_mod=action_xi_mod(f, params, ref, cutoff),
        reference=ref,
        cutoff=cutoff,
    )


@dataclass(frozen=True)
class DlLimit:
    """One-sided limit of an action's l-derivative at l -> 0+."""

    limit: float
    sequence: tuple[float, float, float]
    extrapolant_gap: float

    @property
    def jump(self) -> float:
        """Across-zero jump; the l -> 0- limit is the negation by evenness in l."""
        return 2.0 * self.limit


def dl_limit(action: str, h: float, g: float, params: Params,
             ref: ReferenceChoice = ReferenceChoice.SELF,
             cutoff: float | None = None, eps: float = DL_EPS,
             line_margin: float = 1e-3) -> DlLimit:
    """Richardson-extrapolated limit of dI/dl as l -> 0+.

    ``action`` is "eta" or "xi_mod".  Central differences are taken at
    l in {eps, 2 eps, 4 eps} with half-width l/2, then extrapolated assuming
    a smooth l-expansion; disagreement of successive extrapolants beyond
    DL_CONVERGENCE raises ExtrapolationError with the raw sequence attached.
    """
    offsets = (params.mu2 - params.mu1, params.mu1 - params.mu2, params.strength_sum)
    d = min(abs((g - h) - off) for off in offsets)
    if d < line_margin:
        raise ValueError(
            f"(h, g) within {line_margin} of a critical line (distance {d:.2e})")
    if cutoff is None and action == "xi_mod":
        cutoff = default_cutoff(InvariantPoint(h, 4 * eps, g), params, ref)

    def ival(l: float) -> float:
        f = InvariantPoint(h, l, g)
        if action == "eta":
            return action_eta(f, params).value
        if action == "xi_mod":
            return action_xi_mod(f, params, ref, cutoff).value
        raise ValueError(f"action must be 'eta' or 'xi_mod', got {action!r}")

    def deriv(l: float) -> float:
        dd = 0.5 * l
        return (ival(l + dd) - ival(l - dd)) / (2.0 * dd)

    d1, d2, d4 = deriv(eps), deriv(2 * eps), deriv(4 * eps)
    # quadratic-in-l model through the three samples
    limit = (8.0 * d1 - 6.0 * d2 + d4) / 3.0
    gap = abs((2.0 * d1 - d2) - (2.0 * d2 - d4))
    if gap > DL_CONVERGENCE:
        raise ExtrapolationError(
            f"dl limit of {action} at (h={h}, g={g}) did not converge "
            f"(extrapolant gap {gap:.2e})", sequence=(d1, d2, d4))
    return DlLimit(limit, (d1, d2, d4), gap)
