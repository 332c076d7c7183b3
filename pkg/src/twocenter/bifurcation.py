"""Critical values of the integral map and physicality classification.

The critical set of (h, l, g) consists of three lines in every constant-h
slice (at l = 0, offsets mu2-mu1, mu1-mu2, mu1+mu2 in g - h) and parametric
families of critical curves where a separated turning point degenerates into
a double root.  Values admitting no classical motion are filtered out by
``classify``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import quartic
from .model import InvariantPoint, Params

#: root gap under which a value is reported as sitting on the critical set
BORDERLINE_GAP = 1e-5


@dataclass(frozen=True)
class CriticalLine:
    """The locus {g = h + offset, l = 0}."""

    index: int
    offset: float

    def g_at(self, h: float) -> float:
        return h + self.offset


@dataclass
class CriticalCurve:
    """One sampled parametric family of critical values.

    ``family`` is one of "planar-lambda", "planar-nu", "spatial-xi",
    "spatial-eta"; ``param`` holds the parameter samples and h/l/g the
    corresponding values; non-physical samples are flagged, not dropped.
    """

    family: str
    param_name: str
    param: np.ndarray
    h: np.ndarray
    l: np.ndarray
    g: np.ndarray
    physical: np.ndarray  # bool per sample


@dataclass
class CriticalSet:
    lines: list[CriticalLine]
    curves: list[CriticalCurve] = field(default_factory=list)


@dataclass(frozen=True)
class PhysicalClassification:
    """Sign intervals of the separated momenta at one invariant point."""

    xi_intervals: tuple[tuple[float, float], ...]
    eta_intervals: tuple[tuple[float, float], ...]
    physical: bool
    borderline: bool

    @property
    def scattering(self) -> bool:
        """True when the xi motion reaches infinity (unbounded interval)."""
        return any(math.isinf(iv[1]) for iv in self.xi_intervals)


def critical_lines(params: Params) -> tuple[CriticalLine, CriticalLine, CriticalLine]:
    """The three l = 0 critical lines, as exact g - h offsets."""
    return (
        CriticalLine(1, params.mu2 - params.mu1),
        CriticalLine(2, params.mu1 - params.mu2),
        CriticalLine(3, params.mu1 + params.mu2),
    )


def classify(f: InvariantPoint, params: Params,
             strengths: tuple[float, float] | None = None) -> PhysicalClassification:
    """Allowed coordinate ranges for the motion on the level set f.

    Intervals are the closures of {momentum^2 > 0} with endpoints at real
    roots of the quartic numerators (or the coordinate-range boundary).
    """
    if strengths is None:
        strengths = (params.strength_sum, params.strength_diff)
    s_plus, s_minus = strengths
    cxi = quartic.momentum_numerator_coeffs(f.h, f.g, f.l, s_plus)
    ceta = quartic.momentum_numerator_coeffs(f.h, f.g, f.l, s_minus)
    xi_iv = quartic.positivity_intervals(cxi, 1.0, np.inf, unbounded_hi=True)
    eta_iv = quartic.positivity_intervals(ceta, -1.0, 1.0)
    borderline = (quartic.has_double_root(cxi, 1.0, np.inf, gap=BORDERLINE_GAP)
                  or quartic.has_double_root(ceta, -1.0, 1.0, gap=BORDERLINE_GAP)
                  or any(iv[1] - iv[0] < BORDERLINE_GAP for iv in xi_iv)
                  or any(iv[1] - iv[0] < BORDERLINE_GAP for iv in eta_iv))
    return PhysicalClassification(
        xi_intervals=tuple(xi_iv),
        eta_intervals=tuple(eta_iv),
        physical=bool(xi_iv) and bool(eta_iv),
        borderline=borderline,
    )


def _other_motion_allowed(kind: str, h: float, l: float, g: float,
                          params: Params) -> bool:
    """Whether the coordinate complementary to ``kind`` admits motion."""
    if kind == "xi":
        c = quartic.momentum_numerator_coeffs(h, g, l, params.strength_diff)
        return bool(quartic.positivity_intervals(c, -1.0, 1.0))
    c = quartic.momentum_numerator_coeffs(h, g, l, params.strength_sum)
    return bool(quartic.positivity_intervals(c, 1.0, np.inf, unbounded_hi=True))


def critical_curves_planar(params: Params, n_samples: int = 2000,
                           cosh_max: float = 40.0) -> list[CriticalCurve]:
    """The two parametric critical families of the l = 0 problem.

    Parametrized by c = cosh(lambda) in [1, cosh_max] and by sin(nu) in
    [-1, 1]; each satisfies g*h = -(strength)^2/4 along the family.
    """
    curves = []
    mu = params.strength_sum
    if mu != 0.0:
        c = np.linspace(1.0, cosh_max, n_samples)
        g = mu * c / 2.0
        h = -mu / (2.0 * c)
        phys = np.array([_planar_point_allowed(hh, gg, params, "nu")
                         for hh, gg in zip(h, g)])
        curves.append(CriticalCurve("planar-lambda", "cosh_lambda", c, h,
                                    np.zeros_like(h), g, phys))
    d = params.strength_diff
    if d != 0.0:
        s = np.concatenate([np.linspace(-1.0, -1e-3, n_samples // 2),
                            np.linspace(1e-3, 1.0, n_samples // 2)])
        g = d * s / 2.0
        h = -d / (2.0 * s)
        phys = np.array([_planar_point_allowed(hh, gg, params, "lambda")
                         for hh, gg in zip(h, g)])
        curves.append(CriticalCurve("planar-nu", "sin_nu", s, h,
                                    np.zeros_like(h), g, phys))
    return curves


def _planar_point_allowed(h: float, g: float, params: Params, other: str) -> bool:
    """Planar physicality: the complementary planar momentum is >= 0 somewhere.

    Planar (l = 0) squared momenta, in x = cosh(lambda) and s = sin(nu):
    p_lambda^2 = 2h x^2 + 2(mu1+mu2) x - 2g,  p_nu^2 = -2h s^2 - 2(mu1-mu2) s + 2g.
    """
    tol = 1e-12
    if other == "nu":
        s = np.linspace(-1.0, 1.0, 201)
        vals = -2 * h * s * s - 2 * params.strength_diff * s + 2 * g
        return bool(np.max(vals) >= -tol)
    x = np.concatenate([np.linspace(1.0, 50.0, 400)])
    vals = 2 * h * x * x + 2 * params.strength_sum * x - 2 * g
    return bool(np.max(vals) >= -tol)


def critical_curves_spatial(params: Params, h: float, n_samples: int = 2000,
                            xi_max: float = 40.0) -> list[CriticalCurve]:
    """Fixed-energy critical curves in the (l, g) plane.

    Each family solves the double-root condition of its quartic; samples with
    negative l^2 are outside the slice and are not emitted.  Both signs of l
    are returned (the diagram is symmetric under l -> -l).
    """
    curves = []
    for family, s, lo, hi in (
        ("spatial-xi", params.strength_sum, 1.0 + 1e-9, xi_max),
        ("spatial-eta", params.strength_diff, -1.0 + 1e-9, 1.0 - 1e-9),
    ):
        if family == "spatial-eta":
            u = np.concatenate([np.linspace(lo, -1e-4, n_samples // 2),
                                np.linspace(1e-4, hi, n_samples // 2)])
        else:
            u = np.linspace(lo, hi, n_samples)
        l2 = -(s + 2.0 * h * u) * (u * u - 1.0) ** 2 / u
        ok = l2 >= 0.0
        if not np.any(ok):
            continue
        u = u[ok]
        l2 = l2[ok]
        g = h * (2.0 * u * u - 1.0) + s * (3.0 * u * u - 1.0) / (2.0 * u)
        l = np.sqrt(l2)
        kind = "xi" if family == "spatial-xi" else "eta"
        phys = np.array([_other_motion_allowed(kind, h, ll, gg, params)
                         for ll, gg in zip(l, g)])
        # mirror to l < 0
        param = np.concatenate([u[::-1], u])
        lsgn = np.concatenate([-l[::-1], l])
        gs = np.concatenate([g[::-1], g])
        hs = np.full_like(gs, h)
        physs = np.concatenate([phys[::-1], phys])
        curves.append(CriticalCurve(family, kind, param, hs, lsgn, gs, physs))
    return curves


def min_distance_to_critical(h: float, l: float, g: float, params: Params,
                             spatial: list[CriticalCurve] | None = None) -> float:
    """Distance in the (g, l) slice plane from (g, l) to the critical set at energy h."""
    lines = critical_lines(params)
    d = min(math.hypot(g - (h + ln.offset), l) for ln in lines)
    if spatial is None:
        spatial = critical_curves_spatial(params, h)
    for cur in spatial:
        if cur.g.size:
            d = min(d, float(np.min(np.hypot(cur.g - g, cur.l - l))))
    return d
