"""Model ids, status codes and the tabulated-potential parameter layout.

A "model" is a force field the stepper kernels know how to evaluate:

======================  ====  ===========================================
model                   dim   parameter vector
======================  ====  ===========================================
TWO_CENTER_3D            7    (mu1, mu2, a)            state (q, p, phi)
GAUSS_BUMP_2D            4    (V0, w)
KEPLER_2D                4    (mu,)
TWO_CENTER_2D            4    (mu1, mu2, a)            centers at y = -+a
RADIAL_SPLINE_2D         4    packed natural cubic spline, see below
======================  ====  ===========================================

The spline layout is (n, r[0..n-1], v[0..n-1], m[0..n-1]) with m the second
derivatives; V = 0 beyond the last knot and constant inside the first.
"""
from __future__ import annotations

import numpy as np

TWO_CENTER_3D = 0
GAUSS_BUMP_2D = 1
KEPLER_2D = 2
TWO_CENTER_2D = 3
RADIAL_SPLINE_2D = 4

STATUS_TIME_LIMIT = 0
STATUS_RADIUS = 1
STATUS_COLLISION = 2
STATUS_MAX_STEPS = 3

DIM = {
    TWO_CENTER_3D: 7,
    GAUSS_BUMP_2D: 4,
    KEPLER_2D: 4,
    TWO_CENTER_2D: 4,
    RADIAL_SPLINE_2D: 4,
}


def pack_spline(r: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Natural cubic spline through (r, v), packed for the kernels."""
    r = np.asarray(r, dtype=float)
    v = np.asarray(v, dtype=float)
    n = r.size
    if n < 3:
        raise ValueError("need at least 3 radial samples")
    if np.any(np.diff(r) <= 0):
        raise ValueError("radial samples must be strictly increasing")
    h = np.diff(r)
    # tridiagonal system for interior second derivatives, natural ends
    a = np.zeros((n, n))
    rhs = np.zeros(n)
    a[0, 0] = 1.0
    a[-1, -1] = 1.0
    for i in range(1, n - 1):
        a[i, i - 1] = h[i - 1] / 6.0
        a[i, i] = (h[i - 1] + h[i]) / 3.0
        a[i, i + 1] = h[i] / 6.0
        rhs[i] = (v[i + 1] - v[i]) / h[i] - (v[i] - v[i - 1]) / h[i - 1]
    m = np.linalg.solve(a, rhs)
    return np.concatenate(([float(n)], r, v, m))


def spline_eval(prm: np.ndarray, x: float) -> float:
    n = int(prm[0])
    r = prm[1:1 + n]
    v = prm[1 + n:1 + 2 * n]
    m = prm[1 + 2 * n:1 + 3 * n]
    if x >= r[-1]:
        return 0.0
    if x <= r[0]:
        return float(v[0])
    i = int(np.searchsorted(r, x) - 1)
    h = r[i + 1] - r[i]
    u = (r[i + 1] - x) / h
    w = (x - r[i]) / h
    return float(u * v[i] + w * v[i + 1]
                 + ((u ** 3 - u) * m[i] + (w ** 3 - w) * m[i + 1]) * h * h / 6.0)


def spline_deriv(prm: np.ndarray, x: float) -> float:
    n = int(prm[0])
    r = prm[1:1 + n]
    v = prm[1 + n:1 + 2 * n]
    m = prm[1 + 2 * n:1 + 3 * n]
    if x >= r[-1] or x <= r[0]:
        return 0.0
    i = int(np.searchsorted(r, x) - 1)
    h = r[i + 1] - r[i]
    u = (r[i + 1] - x) / h
    w = (x - r[i]) / h
    return float((v[i + 1] - v[i]) / h
                 + ((3 * w * w - 1) * m[i + 1] - (3 * u * u - 1) * m[i]) * h / 6.0)
