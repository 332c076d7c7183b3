"""Pure-Python trajectory kernel (fallback when the C extension is absent).

Implements the same embedded Dormand-Prince 5(4) stepper with PI step-size
control as ``_core.pyx``; results agree with the compiled kernel to roundoff.
"""
from __future__ import annotations

import math

import numpy as np

from . import models

BACKEND = "pure"

# Dormand-Prince 5(4) tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 10.0
_PI_ALPHA = 0.17
_PI_BETA = 0.04


def _rhs(model: int, prm: np.ndarray, y: np.ndarray) -> np.ndarray:
    if model == models.TWO_CENTER_3D:
        mu1, mu2, a = prm[0], prm[1], prm[2]
        x, yy, z, px, py, pz = y[:6]
        rho2 = x * x + yy * yy
        dz1 = z + a
        dz2 = z - a
        r1 = math.sqrt(rho2 + dz1 * dz1)
        r2 = math.sqrt(rho2 + dz2 * dz2)
        c1 = -mu1 / (r1 * r1 * r1)
        c2 = -mu2 / (r2 * r2 * r2)
        out = np.empty(7)
        out[0] = px
        out[1] = py
        out[2] = pz
        out[3] = (c1 + c2) * x
        out[4] = (c1 + c2) * yy
        out[5] = c1 * dz1 + c2 * dz2
        lz = x * py - yy * px
        out[6] = lz / rho2 if rho2 > 1e-300 else 0.0
        return out
    if model == models.GAUSS_BUMP_2D:
        v0, w = prm[0], prm[1]
        x, yy, px, py = y
        r2 = x * x + yy * yy
        c = v0 * math.exp(-r2 / (w * w)) * 2.0 / (w * w)
        return np.array([px, py, c * x, c * yy])
    if model == models.KEPLER_2D:
        mu = prm[0]
        x, yy, px, py = y
        r = math.sqrt(x * x + yy * yy)
        c = -mu / (r * r * r)
        return np.array([px, py, c * x, c * yy])
    if model == models.TWO_CENTER_2D:
        mu1, mu2, a = prm[0], prm[1], prm[2]
        x, yy, px, py = y
        dy1 = yy + a
        dy2 = yy - a
        r1 = math.sqrt(x * x + dy1 * dy1)
        r2 = math.sqrt(x * x + dy2 * dy2)
        c1 = -mu1 / (r1 * r1 * r1)
        c2 = -mu2 / (r2 * r2 * r2)
        return np.array([px, py, (c1 + c2) * x, c1 * dy1 + c2 * dy2])
    if model == models.RADIAL_SPLINE_2D:
        x, yy, px, py = y
        r = math.sqrt(x * x + yy * yy)
        dv = models.spline_deriv(prm, r)
        c = -dv / r if r > 1e-12 else 0.0
        return np.array([px, py, c * x, c * yy])
    raise ValueError(f"unknown model id {model}")


def _radius2(model: int, y: np.ndarray) -> float:
    if model == models.TWO_CENTER_3D:
        return y[0] * y[0] + y[1] * y[1] + y[2] * y[2]
    return y[0] * y[0] + y[1] * y[1]


def _min_center_dist(model: int, prm: np.ndarray, y: np.ndarray) -> float:
    if model == models.TWO_CENTER_3D:
        rho2 = y[0] * y[0] + y[1] * y[1]
        r1 = math.sqrt(rho2 + (y[2] + prm[2]) ** 2)
        r2 = math.sqrt(rho2 + (y[2] - prm[2]) ** 2)
        return min(r1, r2)
    if model == models.TWO_CENTER_2D:
        r1 = math.sqrt(y[0] ** 2 + (y[1] + prm[2]) ** 2)
        r2 = math.sqrt(y[0] ** 2 + (y[1] - prm[2]) ** 2)
        return min(r1, r2)
    if model == models.KEPLER_2D:
        return math.sqrt(y[0] ** 2 + y[1] ** 2)
    return math.inf


def _error_norm(delta: np.ndarray, y0: np.ndarray, y1: np.ndarray,
                rtol: float, atol: float) -> float:
    sc = atol + rtol * np.maximum(np.abs(y0), np.abs(y1))
    return math.sqrt(float(np.mean((delta / sc) ** 2)))


def _initial_step(model, prm, y0, f0, rtol, atol, t_span):
    sc = atol + rtol * np.abs(y0)
    d0 = math.sqrt(float(np.mean((y0 / sc) ** 2)))
    d1 = math.sqrt(float(np.mean((f0 / sc) ** 2)))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    f1 = _rhs(model, prm, y0 + h0 * f0)
    d2 = math.sqrt(float(np.mean(((f1 - f0) / sc) ** 2))) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1, t_span)


def propagate(model: int, prm, y0, t_max: float, r_max: float,
              rtol: float = 1e-10, atol: float = 1e-12,
              collision_eps: float = 1e-6, max_steps: int = 2_000_000,
              record: bool = False):
    """Integrate until escape, collision or the time limit.

    Returns (status, t_end, y_end, n_accepted, samples) with status one of
    models.STATUS_*; samples is an (n, 1+dim) array (t, y) when recording.
    """
    prm = np.asarray(prm, dtype=float)
    y = np.asarray(y0, dtype=float).copy()
    n = y.size
    t = 0.0
    k = [np.zeros(n) for _ in range(7)]
    k[0] = _rhs(model, prm, y)
    h = _initial_step(model, prm, y, k[0], rtol, atol, t_max)
    fac_old = 1e-4
    rmax2 = r_max * r_max
    rec = [np.concatenate(([0.0], y))] if record else None
    status = models.STATUS_TIME_LIMIT
    naccept = 0

    if _min_center_dist(model, prm, y) < collision_eps:
        return models.STATUS_COLLISION, t, y, 0, _stack(rec)

    for _ in range(max_steps):
        if t >= t_max:
            status = models.STATUS_TIME_LIMIT
            break
        if h < 1e-14 * max(1.0, abs(t)):
            status = models.STATUS_COLLISION  # step underflow near a center
            break
        hs = min(h, t_max - t)
        # stages
        for i in range(1, 7):
            yi = y.copy()
            aij = _A[i]
            for j in range(i):
                if aij[j] != 0.0:
                    yi += (hs * aij[j]) * k[j]
            k[i] = _rhs(model, prm, yi)
        y_new = yi  # stage-7 nodes equal the 5th-order solution (FSAL)
        err_vec = hs * (_E[0] * k[0] + _E[2] * k[2] + _E[3] * k[3]
                        + _E[4] * k[4] + _E[5] * k[5] + _E[6] * k[6])
        err = _error_norm(err_vec, y, y_new, rtol, atol)
        if err <= 1.0:
            t_new = t + hs
            f_new = k[6].copy()
            # escape event: locate crossing by bisection on the Hermite interpolant
            if _radius2(model, y_new) >= rmax2:
                t_ev, y_ev = _locate_escape(model, t, y, k[0], t_new, y_new,
                                            f_new, rmax2)
                t, y = t_ev, y_ev
                status = models.STATUS_RADIUS
                if record:
                    rec.append(np.concatenate(([t], y)))
                break
            t, y = t_new, y_new
            k[0] = f_new
            naccept += 1
            if record:
                rec.append(np.concatenate(([t], y)))
            if _min_center_dist(model, prm, y) < collision_eps:
                status = models.STATUS_COLLISION
                break
            fac = _SAFETY * err ** -_PI_ALPHA * fac_old ** _PI_BETA if err > 0 else _MAX_FACTOR
            fac_old = max(err, 1e-4)
            h *= min(_MAX_FACTOR, max(_MIN_FACTOR, fac))
        else:
            h *= max(_MIN_FACTOR, _SAFETY * err ** -0.2)
    else:
        status = models.STATUS_MAX_STEPS
    return status, t, y, naccept, _stack(rec)


def _stack(rec):
    return np.array(rec) if rec is not None else None


def _hermite(t0, y0, f0, t1, y1, f1, t):
    h = t1 - t0
    s = (t - t0) / h
    h00 = (1 + 2 * s) * (1 - s) ** 2
    h10 = s * (1 - s) ** 2
    h01 = s * s * (3 - 2 * s)
    h11 = s * s * (s - 1)
    return h00 * y0 + h10 * h * f0 + h01 * y1 + h11 * h * f1


def _locate_escape(model, t0, y0, f0, t1, y1, f1, rmax2):
    lo, hi = t0, t1
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        ym = _hermite(t0, y0, f0, t1, y1, f1, mid)
        if _radius2(model, ym) >= rmax2:
            hi = mid
        else:
            lo = mid
        if hi - lo < 1e-13 * max(1.0, abs(t1)):
            break
    t_ev = hi
    return t_ev, _hermite(t0, y0, f0, t1, y1, f1, t_ev)
