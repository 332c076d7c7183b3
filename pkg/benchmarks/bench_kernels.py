"""Benchmark: compiled Cython stepper vs the pure-Python fallback.

Usage:  python benchmarks/bench_kernels.py [--repeat N]

Runs the same workloads through both kernel implementations and prints
timings, speedups and a cross-check that they produce the same physics.
"""
import argparse
import time

import numpy as np


def _load_backends():
    from twocenter.kernels import pure

    backends = {"pure": pure}
    try:
        from twocenter.kernels import _core

        backends["compiled"] = _core
    except ImportError:
        print("note: compiled kernel not built; benchmarking pure only")
    return backends


def workload_scattering(backend, n=20):
    """Long two-center passes out to a large radius."""
    from twocenter.kernels import models

    rng = np.random.default_rng(0)
    final = 0.0
    done = 0
    while done < n:
        q = rng.normal(0, 4, 3)
        q *= 5.0 / np.linalg.norm(q)
        p = rng.normal(0, 1.2, 3)
        r1 = np.linalg.norm(q - [0, 0, -1])
        r2 = np.linalg.norm(q - [0, 0, 1])
        if 0.5 * p @ p - 2.0 / r1 - 1.0 / r2 < 0.1:  # keep scattering states only
            continue
        y0 = np.concatenate([q, p, [0.0]])
        st, t, y, na, _ = backend.propagate(models.TWO_CENTER_3D, [2.0, 1.0, 1.0],
                                            y0, 1e5, 2000.0, rtol=1e-13,
                                            atol=1e-15)
        final += y[0]
        done += 1
    return final


def workload_sweep(backend, n=256):
    """Short planar shots through a Gaussian bump (degree-sweep style)."""
    from twocenter.kernels import models

    acc = 0.0
    for b in np.linspace(-8, 8, n):
        y0 = np.array([-12.0, b, 1.0, 0.0])
        st, t, y, na, _ = backend.propagate(models.GAUSS_BUMP_2D, [1.0, 1.0], y0,
                                            1e5, 14.0, rtol=1e-9, atol=1e-12)
        acc += np.arctan2(y[3], y[2])
    return acc


def workload_deflection(backend, n=4):
    """Radius-matched azimuth-swing passes (deflection-difference style)."""
    from twocenter import dynamics
    from twocenter.kernels import models
    from twocenter.model import InvariantPoint, Params

    params = Params(2.0, 1.0, 1.0)
    acc = 0.0
    for k in range(n):
        f = InvariantPoint(1.0, 0.2 + 0.05 * k, 4.0)
        s0 = dynamics.fiber_state(f, params, xi0=800.0)
        y0 = np.concatenate([s0.q, s0.p, [0.0]])
        st, t, y, na, _ = backend.propagate(models.TWO_CENTER_3D, [2.0, 1.0, 1.0],
                                            y0, 1e7, float(np.linalg.norm(s0.q)),
                                            rtol=1e-12, atol=1e-14)
        acc += y[6]
    return acc


WORKLOADS = [
    ("scattering x20 (rtol 1e-13)", workload_scattering),
    ("bump sweep x256 (rtol 1e-9)", workload_sweep),
    ("deflection passes x4 (rtol 1e-12)", workload_deflection),
]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = _load_backends()
    print(f"{'workload':38s}" + "".join(f"{name:>12s}" for name in backends)
          + f"{'speedup':>10s}")
    for label, fn in WORKLOADS:
        times = {}
        values = {}
        for name, mod in backends.items():
            best = np.inf
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                values[name] = fn(mod)
                best = min(best, time.perf_counter() - t0)
            times[name] = best
        row = f"{label:38s}" + "".join(f"{times[n] * 1e3:10.1f}ms" for n in backends)
        if len(backends) == 2:
            row += f"{times['pure'] / times['compiled']:9.1f}x"
            agree = abs(values["pure"] - values["compiled"])
            scale = max(1.0, abs(values["pure"]))
            assert agree / scale < 1e-8, f"backend mismatch on {label}: {agree}"
        print(row)
    if len(backends) == 2:
        print("cross-check: both backends agree on every workload (rel 1e-8)")


if __name__ == "__main__":
    main()
