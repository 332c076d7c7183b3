"""Real roots of the separated momentum polynomials.

Both separated momentum-squared functions share one quartic numerator

    N(x; h, g, l, s) = 2h x^4 + 2s x^3 - 2(h + g) x^2 - 2s x + (2g - l^2),

with s the xi-strength (mu1 + mu2) or the eta-strength (mu1 - mu2).  Roots
are taken from the companion matrix and polished with a few Newton steps;
near-double roots (values on the critical set) are reported via the
discriminant-style gap check.
"""
from __future__ import annotations

import numpy as np

from .errors import RootFindingError

#: roots closer than this are treated as a double root (critical value)
DOUBLE_ROOT_GAP = 1e-10

#: imaginary parts below this (relative to root scale) count as real
_IMAG_TOL = 1e-9


def momentum_numerator_coeffs(h: float, g: float, l: float, s: float) -> np.ndarray:
    """Coefficients (highest degree first) of the separated quartic numerator."""
    return np.array([2.0 * h, 2.0 * s, -2.0 * (h + g), -2.0 * s, 2.0 * g - l * l])


def eval_poly(coeffs: np.ndarray, x):
    return np.polyval(coeffs, x)


def _newton_polish(coeffs: np.ndarray, x: float, iters: int = 4) -> float:
    deriv = np.polyder(coeffs)
    for _ in range(iters):
        f = np.polyval(coeffs, x)
        fp = np.polyval(deriv, x)
        if fp == 0.0:
            break
        step = f / fp
        if not np.isfinite(step):
            break
        x -= step
    return x


def real_roots(coeffs: np.ndarray, polish: bool = True) -> np.ndarray:
    """Sorted real roots of a polynomial given by its coefficient array.

    Leading near-zero coefficients are trimmed so degenerate cases (h = 0,
    s = 0) reduce to the lower-degree polynomial they actually are.
    """
    c = np.asarray(coeffs, dtype=float)
    scale = np.max(np.abs(c))
    if scale == 0.0:
        return np.array([])
    mask = np.abs(c) > 1e-14 * scale
    first = np.argmax(mask)
    c = c[first:]
    if c.size <= 1:
        return np.array([])
    roots = np.roots(c)
    if roots.size == 0:
        return np.array([])
    rscale = max(1.0, np.max(np.abs(roots)))
    real = roots[np.abs(roots.imag) < _IMAG_TOL * rscale].real
    if polish and real.size:
        real = np.array([_newton_polish(c, x) for x in real])
    return np.sort(real)


def roots_in(coeffs: np.ndarray, lo: float, hi: float) -> np.ndarray:
    """Real roots restricted to the open interval (lo, hi)."""
    rr = real_roots(coeffs)
    return rr[(rr > lo) & (rr < hi)]


def positivity_intervals(coeffs: np.ndarray, lo: float, hi: float,
                         unbounded_hi: bool = False) -> list[tuple[float, float]]:
    """Closed intervals inside (lo, hi) where the polynomial is >= 0.

    With ``unbounded_hi`` the last interval may extend to +inf (scattering
    range of the xi coordinate).  Interval endpoints are polynomial roots or
    the domain boundary.
    """
    rr = roots_in(coeffs, lo, hi)
    pts = [lo, *rr, hi]
    out: list[tuple[float, float]] = []
    for i in range(len(pts) - 1):
        a, b = pts[i], pts[i + 1]
        if b - a <= 0:
            continue
        mid = _interval_probe(a, b, hi)
        if np.polyval(coeffs, mid) > 0.0:
            right = np.inf if (unbounded_hi and i == len(pts) - 2 and np.isinf(hi)) else b
            out.append((a, right))
    # merge intervals separated by a double root (tangency)
    merged: list[tuple[float, float]] = []
    for iv in out:
        if merged and iv[0] - merged[-1][1] < DOUBLE_ROOT_GAP:
            merged[-1] = (merged[-1][0], iv[1])
        else:
            merged.append(iv)
    return merged


def _interval_probe(a: float, b: float, hi: float) -> float:
    if np.isinf(b):
        return a + 1.0 if np.isinf(hi) else 0.5 * (a + hi)
    return 0.5 * (a + b)


def has_double_root(coeffs: np.ndarray, lo: float, hi: float,
                    gap: float = DOUBLE_ROOT_GAP) -> bool:
    rr = roots_in(coeffs, lo, hi)
    return bool(rr.size >= 2 and np.any(np.diff(rr) < gap))


def check_root_residual(coeffs: np.ndarray, roots: np.ndarray, tol: float = 1e-8) -> None:
    """Sanity check that polished roots actually satisfy the polynomial."""
    if roots.size == 0:
        return
    scale = max(1.0, float(np.max(np.abs(coeffs))))
    res = np.abs(np.polyval(coeffs, roots)) / scale
    if np.any(res > tol):
        raise RootFindingError(f"root residual {res.max():.3e} exceeds {tol:.1e}")
