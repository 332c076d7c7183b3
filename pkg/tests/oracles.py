"""Independent oracles the tests check the library against.

Everything here deliberately avoids the library's own numerical paths:
integrals are evaluated with mpmath bignums, quartic roots come from
mpmath.polyroots, and action integrals use fixed-panel trapezoid sums in the
substituted variable rather than adaptive Gauss panels.
"""
from __future__ import annotations

import math

import mpmath as mp
import numpy as np

mp.mp.dps = 50


def integrals_mp(q, p, mu1, mu2, a):
    """(h, l, g) by direct bignum evaluation of the defining expressions."""
    qx, qy, qz = (mp.mpf(repr(float(v))) for v in q)
    px, py, pz = (mp.mpf(repr(float(v))) for v in p)
    mu1, mu2, a = mp.mpf(repr(float(mu1))), mp.mpf(repr(float(mu2))), mp.mpf(repr(float(a)))
    r1 = mp.sqrt(qx**2 + qy**2 + (qz + a)**2)
    r2 = mp.sqrt(qx**2 + qy**2 + (qz - a)**2)
    h = (px**2 + py**2 + pz**2) / 2 - mu1 / r1 - mu2 / r2
    lx = qy * pz - qz * py
    ly = qz * px - qx * pz
    lz = qx * py - qy * px
    l2 = lx**2 + ly**2 + lz**2
    g = (h + (l2 - a**2 * (px**2 + py**2)) / 2
         + a * (qz + a) * mu1 / r1 - a * (qz - a) * mu2 / r2)
    return float(h), float(lz), float(g)


def quartic_roots_mp(h, g, l, s, lo, hi):
    """Real roots of the separated numerator in (lo, hi), via mpmath.polyroots."""
    coeffs = [2 * mp.mpf(repr(h)), 2 * mp.mpf(repr(s)),
              -2 * (mp.mpf(repr(h)) + mp.mpf(repr(g))), -2 * mp.mpf(repr(s)),
              2 * mp.mpf(repr(g)) - mp.mpf(repr(l)) ** 2]
    while coeffs and abs(coeffs[0]) < mp.mpf("1e-30"):
        coeffs = coeffs[1:]
    if len(coeffs) <= 1:
        return []
    roots = mp.polyroots(coeffs, maxsteps=200, extraprec=80)
    out = [float(r.real) for r in roots
           if abs(r.imag) < mp.mpf("1e-30") and lo < r.real < hi]
    return sorted(out)


def _numerator(x, h, g, l, s):
    return 2 * h * x**4 + 2 * s * x**3 - 2 * (h + g) * x**2 - 2 * s * x + 2 * g - l * l


def action_eta_trapezoid(h, g, l, s_minus, n=1_000_000):
    """(1/pi) * int |p_eta| via n-panel trapezoid in the sin-substituted variable."""
    roots = quartic_roots_mp(h, g, l, s_minus, -1.0, 1.0)
    iv = None
    for i in range(len(roots) - 1):
        mid = 0.5 * (roots[i] + roots[i + 1])
        if _numerator(mid, h, g, l, s_minus) > 0:
            iv = (roots[i], roots[i + 1])
    assert iv is not None, "no eta interval"
    a, b = iv
    midp, hw = 0.5 * (a + b), 0.5 * (b - a)
    th = np.linspace(-0.5 * math.pi, 0.5 * math.pi, n + 1)
    x = midp + hw * np.sin(th)
    num = np.maximum(_numerator(x, h, g, l, s_minus), 0.0)
    f = np.sqrt(num) / (1.0 - x * x) * hw * np.cos(th)
    return float(np.trapezoid(f, th) / math.pi)


def chi_bump_np(x, lo, hi):
    t = np.clip((x - lo) / (hi - lo), 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        e0 = np.where(t > 0, np.exp(-1.0 / np.maximum(t, 1e-300)), 0.0)
        e1 = np.where(t < 1, np.exp(-1.0 / np.maximum(1.0 - t, 1e-300)), 0.0)
    return e0 / (e0 + e1)


def action_xi_arm_trapezoid(h, g, l, s, cutoff, n=1_000_000):
    """One cutoff xi-arm, (1/pi) int (1-chi)|p_xi|, by brute-force trapezoid.

    The head [xi_min, xi_min + 1] uses the u^2 substitution; the rest is a
    plain trapezoid up to the end of the bump support.
    """
    roots = quartic_roots_mp(h, g, l, s, 1.0, math.inf)
    x0 = roots[-1] if roots else 1.0
    u = np.linspace(0.0, 1.0, n // 2 + 1)
    xi = x0 + u * u
    num = np.maximum(_numerator(xi, h, g, l, s), 0.0)
    grow = np.where(xi > x0, xi - x0, 1.0)
    f = 2.0 * u * u * np.sqrt(num / grow) / (xi * xi - 1.0)
    head = np.trapezoid(f, u)
    xi2 = np.linspace(x0 + 1.0, cutoff + 1.0, n // 2 + 1)
    num2 = np.maximum(_numerator(xi2, h, g, l, s), 0.0)
    f2 = (1.0 - chi_bump_np(xi2, cutoff, cutoff + 1.0)) * np.sqrt(num2) / (xi2 * xi2 - 1.0)
    tail = np.trapezoid(f2, xi2)
    return float((head + tail) / math.pi)


def action_xi_mod_trapezoid(h, g, l, mu1, mu2, s_cmp, cutoff, n=1_000_000):
    """Comparison arm minus original arm, both with the shared cutoff bump."""
    return (action_xi_arm_trapezoid(h, g, l, s_cmp, cutoff, n)
            - action_xi_arm_trapezoid(h, g, l, mu1 + mu2, cutoff, n))


def grad_v_central(q, mu1, mu2, a, step=1e-6):
    """Central-difference gradient of the potential."""
    def pot(qq):
        r1 = math.sqrt(qq[0]**2 + qq[1]**2 + (qq[2] + a)**2)
        r2 = math.sqrt(qq[0]**2 + qq[1]**2 + (qq[2] - a)**2)
        return -mu1 / r1 - mu2 / r2

    g = np.zeros(3)
    for i in range(3):
        dq = np.zeros(3)
        dq[i] = step
        g[i] = (pot(q + dq) - pot(q - dq)) / (2 * step)
    return g


def sign_intervals_grid(h, g, l, s, lo, hi, n=100_000, unbounded_hi=False):
    """Positivity intervals of the separated numerator from dense sampling."""
    if math.isinf(hi):
        xs = 1.0 + np.geomspace(1e-7, 1e4, n)
    else:
        xs = np.linspace(lo + 1e-12, hi - 1e-12, n)
    vals = _numerator(xs, h, g, l, s)
    pos = vals > 0
    ivs = []
    start = None
    for i, flag in enumerate(pos):
        if flag and start is None:
            start = xs[i]
        elif not flag and start is not None:
            ivs.append((start, xs[i - 1]))
            start = None
    if start is not None:
        ivs.append((start, math.inf if unbounded_hi else xs[-1]))
    return ivs
