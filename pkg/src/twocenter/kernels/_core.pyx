# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled trajectory kernel: Dormand-Prince 5(4) with PI step control.

Mirrors kernels/pure.py; see that module for the readable reference version.
"""
from libc.math cimport sqrt, exp, fabs, fmin, fmax, pow, INFINITY

import numpy as np

from . import models

BACKEND = "compiled"

DEF NMAX = 8

cdef double[7] C_NODES
cdef double[7][7] A_TAB
cdef double[7] E_TAB

C_NODES[0] = 0.0; C_NODES[1] = 1.0/5; C_NODES[2] = 3.0/10
C_NODES[3] = 4.0/5; C_NODES[4] = 8.0/9; C_NODES[5] = 1.0; C_NODES[6] = 1.0

A_TAB[1][0] = 1.0/5
A_TAB[2][0] = 3.0/40;        A_TAB[2][1] = 9.0/40
A_TAB[3][0] = 44.0/45;       A_TAB[3][1] = -56.0/15;      A_TAB[3][2] = 32.0/9
A_TAB[4][0] = 19372.0/6561;  A_TAB[4][1] = -25360.0/2187; A_TAB[4][2] = 64448.0/6561
A_TAB[4][3] = -212.0/729
A_TAB[5][0] = 9017.0/3168;   A_TAB[5][1] = -355.0/33;     A_TAB[5][2] = 46732.0/5247
A_TAB[5][3] = 49.0/176;      A_TAB[5][4] = -5103.0/18656
A_TAB[6][0] = 35.0/384;      A_TAB[6][1] = 0.0;           A_TAB[6][2] = 500.0/1113
A_TAB[6][3] = 125.0/192;     A_TAB[6][4] = -2187.0/6784;  A_TAB[6][5] = 11.0/84

E_TAB[0] = 71.0/57600; E_TAB[1] = 0.0; E_TAB[2] = -71.0/16695
E_TAB[3] = 71.0/1920;  E_TAB[4] = -17253.0/339200
E_TAB[5] = 22.0/525;   E_TAB[6] = -1.0/40

cdef int M_TC3 = models.TWO_CENTER_3D
cdef int M_GAUSS = models.GAUSS_BUMP_2D
cdef int M_KEP = models.KEPLER_2D
cdef int M_TC2 = models.TWO_CENTER_2D
cdef int M_SPL = models.RADIAL_SPLINE_2D


cdef inline double _spline_deriv(double[::1] prm, double x) noexcept nogil:
    cdef int n = <int>prm[0]
    cdef int lo, hi, mid, i
    cdef double h, u, w
    if x >= prm[n] or x <= prm[1]:
        return 0.0
    lo = 1; hi = n
    while hi - lo > 1:
        mid = (lo + hi) >> 1
        if prm[mid] <= x:
            lo = mid
        else:
            hi = mid
    i = lo  # knot index (1-based in prm)
    h = prm[i + 1] - prm[i]
    u = (prm[i + 1] - x) / h
    w = (x - prm[i]) / h
    return ((prm[n + i + 1] - prm[n + i]) / h
            + ((3 * w * w - 1) * prm[2 * n + i + 1]
               - (3 * u * u - 1) * prm[2 * n + i]) * h / 6.0)


cdef inline void _rhs(int model, double[::1] prm, double* y, double* out) noexcept nogil:
    cdef double x, yy, z, px, py, pz, rho2, dz1, dz2, r1, r2, c1, c2, r, c, dv
    if model == 0:  # TWO_CENTER_3D
        x = y[0]; yy = y[1]; z = y[2]; px = y[3]; py = y[4]; pz = y[5]
        rho2 = x * x + yy * yy
        dz1 = z + prm[2]
        dz2 = z - prm[2]
        r1 = sqrt(rho2 + dz1 * dz1)
        r2 = sqrt(rho2 + dz2 * dz2)
        c1 = -prm[0] / (r1 * r1 * r1)
        c2 = -prm[1] / (r2 * r2 * r2)
        out[0] = px; out[1] = py; out[2] = pz
        out[3] = (c1 + c2) * x
        out[4] = (c1 + c2) * yy
        out[5] = c1 * dz1 + c2 * dz2
        out[6] = (x * py - yy * px) / rho2 if rho2 > 1e-300 else 0.0
    elif model == 1:  # GAUSS_BUMP_2D
        x = y[0]; yy = y[1]
        r2 = x * x + yy * yy
        c = prm[0] * exp(-r2 / (prm[1] * prm[1])) * 2.0 / (prm[1] * prm[1])
        out[0] = y[2]; out[1] = y[3]
        out[2] = c * x; out[3] = c * yy
    elif model == 2:  # KEPLER_2D
        x = y[0]; yy = y[1]
        r = sqrt(x * x + yy * yy)
        c = -prm[0] / (r * r * r)
        out[0] = y[2]; out[1] = y[3]
        out[2] = c * x; out[3] = c * yy
    elif model == 3:  # TWO_CENTER_2D
        x = y[0]; yy = y[1]
        dz1 = yy + prm[2]
        dz2 = yy - prm[2]
        r1 = sqrt(x * x + dz1 * dz1)
        r2 = sqrt(x * x + dz2 * dz2)
        c1 = -prm[0] / (r1 * r1 * r1)
        c2 = -prm[1] / (r2 * r2 * r2)
        out[0] = y[2]; out[1] = y[3]
        out[2] = (c1 + c2) * x
        out[3] = c1 * dz1 + c2 * dz2
    else:  # RADIAL_SPLINE_2D
        x = y[0]; yy = y[1]
        r = sqrt(x * x + yy * yy)
        dv = _spline_deriv(prm, r)
        c = -dv / r if r > 1e-12 else 0.0
        out[0] = y[2]; out[1] = y[3]
        out[2] = c * x; out[3] = c * yy


cdef inline double _radius2(int model, double* y) noexcept nogil:
    if model == 0:
        return y[0] * y[0] + y[1] * y[1] + y[2] * y[2]
    return y[0] * y[0] + y[1] * y[1]


cdef inline double _min_center_dist(int model, double[::1] prm, double* y) noexcept nogil:
    cdef double rho2, r1, r2
    if model == 0:
        rho2 = y[0] * y[0] + y[1] * y[1]
        r1 = sqrt(rho2 + (y[2] + prm[2]) * (y[2] + prm[2]))
        r2 = sqrt(rho2 + (y[2] - prm[2]) * (y[2] - prm[2]))
        return fmin(r1, r2)
    if model == 3:
        r1 = sqrt(y[0] * y[0] + (y[1] + prm[2]) * (y[1] + prm[2]))
        r2 = sqrt(y[0] * y[0] + (y[1] - prm[2]) * (y[1] - prm[2]))
        return fmin(r1, r2)
    if model == 2:
        return sqrt(y[0] * y[0] + y[1] * y[1])
    return INFINITY


cdef inline double _err_norm(int n, double* delta, double* y0, double* y1,
                             double rtol, double atol) noexcept nogil:
    cdef double s = 0.0, sc
    cdef int i
    for i in range(n):
        sc = atol + rtol * fmax(fabs(y0[i]), fabs(y1[i]))
        s += (delta[i] / sc) * (delta[i] / sc)
    return sqrt(s / n)


cdef void _hermite(int n, double t0, double* y0, double* f0, double t1,
                   double* y1, double* f1, double t, double* out) noexcept nogil:
    cdef double h = t1 - t0
    cdef double s = (t - t0) / h
    cdef double h00 = (1 + 2 * s) * (1 - s) * (1 - s)
    cdef double h10 = s * (1 - s) * (1 - s)
    cdef double h01 = s * s * (3 - 2 * s)
    cdef double h11 = s * s * (s - 1)
    cdef int i
    for i in range(n):
        out[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i]


def propagate(int model, prm_in, y0_in, double t_max, double r_max,
              double rtol=1e-10, double atol=1e-12, double collision_eps=1e-6,
              long max_steps=2_000_000, bint record=False):
    """Compiled counterpart of kernels.pure.propagate (same contract)."""
    cdef double[::1] prm = np.ascontiguousarray(prm_in, dtype=np.float64)
    y_arr = np.array(y0_in, dtype=np.float64)
    cdef double[::1] yv = y_arr
    cdef int n = y_arr.size
    cdef double[NMAX] y, y_new, y_stage, err_vec, f_new, y_ev
    cdef double[8][NMAX] k
    cdef int i, j, st
    cdef long step
    cdef double t = 0.0, h, hs, t_new, err, fac, fac_old = 1e-4
    cdef double rmax2 = r_max * r_max
    cdef double lo, hi, mid
    cdef int status = models.STATUS_MAX_STEPS
    cdef long naccept = 0
    cdef bint done = False

    for i in range(n):
        y[i] = yv[i]

    rec = [] if record else None
    if record:
        rec.append(np.concatenate(([0.0], np.asarray(y_arr))))

    if _min_center_dist(model, prm, &y[0]) < collision_eps:
        return models.STATUS_COLLISION, t, y_arr, 0, _stack(rec, n)

    _rhs(model, prm, &y[0], &k[0][0])
    h = _initial_step(model, prm, y_arr, rtol, atol, t_max)

    for step in range(max_steps):
        if t >= t_max:
            status = models.STATUS_TIME_LIMIT
            done = True
            break
        if h < 1e-14 * fmax(1.0, fabs(t)):
            status = models.STATUS_COLLISION
            done = True
            break
        hs = fmin(h, t_max - t)
        for st in range(1, 7):
            for i in range(n):
                y_stage[i] = y[i]
            for j in range(st):
                if A_TAB[st][j] != 0.0:
                    for i in range(n):
                        y_stage[i] += hs * A_TAB[st][j] * k[j][i]
            _rhs(model, prm, &y_stage[0], &k[st][0])
        for i in range(n):
            y_new[i] = y_stage[i]  # FSAL: stage 7 equals 5th-order solution
            err_vec[i] = hs * (E_TAB[0] * k[0][i] + E_TAB[2] * k[2][i]
                               + E_TAB[3] * k[3][i] + E_TAB[4] * k[4][i]
                               + E_TAB[5] * k[5][i] + E_TAB[6] * k[6][i])
        err = _err_norm(n, &err_vec[0], &y[0], &y_new[0], rtol, atol)
        if err <= 1.0:
            t_new = t + hs
            for i in range(n):
                f_new[i] = k[6][i]
            if _radius2(model, &y_new[0]) >= rmax2:
                lo = t; hi = t_new
                while hi - lo > 1e-13 * fmax(1.0, fabs(t_new)):
                    mid = 0.5 * (lo + hi)
                    _hermite(n, t, &y[0], &k[0][0], t_new, &y_new[0],
                             &f_new[0], mid, &y_ev[0])
                    if _radius2(model, &y_ev[0]) >= rmax2:
                        hi = mid
                    else:
                        lo = mid
                _hermite(n, t, &y[0], &k[0][0], t_new, &y_new[0], &f_new[0],
                         hi, &y_ev[0])
                t = hi
                for i in range(n):
                    y[i] = y_ev[i]
                status = models.STATUS_RADIUS
                if record:
                    rec.append(np.concatenate(([t], _asarr(&y[0], n))))
                done = True
                break
            t = t_new
            for i in range(n):
                y[i] = y_new[i]
                k[0][i] = f_new[i]
            naccept += 1
            if record:
                rec.append(np.concatenate(([t], _asarr(&y[0], n))))
            if _min_center_dist(model, prm, &y[0]) < collision_eps:
                status = models.STATUS_COLLISION
                done = True
                break
            if err > 0:
                fac = 0.9 * pow(err, -0.17) * pow(fac_old, 0.04)
            else:
                fac = 10.0
            fac_old = fmax(err, 1e-4)
            h *= fmin(10.0, fmax(0.2, fac))
        else:
            h *= fmax(0.2, 0.9 * pow(err, -0.2))
    if not done and status == models.STATUS_MAX_STEPS:
        pass
    out = np.empty(n)
    for i in range(n):
        out[i] = y[i]
    return status, t, out, naccept, _stack(rec, n)


cdef _asarr(double* y, int n):
    out = np.empty(n)
    cdef int i
    for i in range(n):
        out[i] = y[i]
    return out


def _stack(rec, int n):
    if rec is None:
        return None
    return np.array(rec)


def _initial_step(int model, double[::1] prm, y0_arr, double rtol, double atol,
                  double t_span):
    y0 = np.asarray(y0_arr, dtype=np.float64)
    cdef double[::1] yv = y0
    cdef double[NMAX] yb, f0, f1
    cdef int n = y0.size
    cdef int i
    cdef double d0, d1, d2, h0, h1, dmax
    for i in range(n):
        yb[i] = yv[i]
    _rhs(model, prm, &yb[0], &f0[0])
    sc = atol + rtol * np.abs(y0)
    f0a = np.empty(n)
    for i in range(n):
        f0a[i] = f0[i]
    d0 = float(np.sqrt(np.mean((y0 / sc) ** 2)))
    d1 = float(np.sqrt(np.mean((f0a / sc) ** 2)))
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    for i in range(n):
        yb[i] = yv[i] + h0 * f0[i]
    _rhs(model, prm, &yb[0], &f1[0])
    f1a = np.empty(n)
    for i in range(n):
        f1a[i] = f1[i]
    d2 = float(np.sqrt(np.mean(((f1a - f0a) / sc) ** 2))) / h0
    dmax = fmax(d1, d2)
    if dmax <= 1e-15:
        h1 = fmax(1e-6, h0 * 1e-3)
    else:
        h1 = pow(0.01 / dmax, 0.2)
    return fmin(fmin(100 * h0, h1), t_span)
