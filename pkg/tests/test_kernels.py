"""Stepper kernels: backend agreement, events, tabulated potentials."""
import numpy as np
import pytest

from twocenter import kernels
from twocenter.kernels import models, pure


def _sample_run(backend, record=False, rtol=1e-10):
    y0 = np.array([5.0, 1.0, 2.0, -1.2, 0.1, -0.4, 0.0])
    return backend.propagate(models.TWO_CENTER_3D, [2.0, 1.0, 1.0], y0,
                             1e6, 800.0, rtol=rtol, atol=1e-12, record=record)


class TestBackends:
    def test_pure_matches_active_backend(self):
        st1, t1, y1, n1, _ = _sample_run(kernels)
        st2, t2, y2, n2, _ = _sample_run(pure)
        assert st1 == st2 == models.STATUS_RADIUS
        assert n1 == n2
        assert t1 == pytest.approx(t2, rel=1e-9)
        np.testing.assert_allclose(y1, y2, rtol=1e-9, atol=1e-9)

    def test_escape_event_localized(self):
        _, _, y, _, _ = _sample_run(kernels)
        assert np.linalg.norm(y[:3]) == pytest.approx(800.0, abs=1e-7)

    def test_collision_status(self):
        y0 = np.array([0.0, 0.0, 3.0, 0.0, 0.0, -1.0, 0.0])
        st, t, y, _, _ = kernels.propagate(models.TWO_CENTER_3D, [2.0, 1.0, 1.0],
                                           y0, 1e3, 1e9)
        assert st == models.STATUS_COLLISION

    def test_time_limit_status(self):
        y0 = np.array([5.0, 1.0, 2.0, -1.2, 0.1, -0.4, 0.0])
        st, t, _, _, _ = kernels.propagate(models.TWO_CENTER_3D, [2.0, 1.0, 1.0],
                                           y0, 1.0, 1e9)
        assert st == models.STATUS_TIME_LIMIT
        assert t == pytest.approx(1.0, abs=1e-12)

    def test_recording_matches_final(self):
        st, t, y, n, rec = _sample_run(kernels, record=True)
        assert rec is not None and rec.shape[1] == 8
        np.testing.assert_allclose(rec[-1, 1:], y, rtol=0, atol=0)
        assert rec[0, 0] == 0.0


class TestSpline:
    def test_interpolates_samples(self):
        r = np.linspace(0.0, 5.0, 60)
        v = np.exp(-r * r)
        prm = models.pack_spline(r, v)
        # natural end conditions cost accuracy at the boundary knots only
        err_all = max(abs(models.spline_eval(prm, x) - np.exp(-x * x))
                      for x in np.linspace(0.05, 4.9, 200))
        err_mid = max(abs(models.spline_eval(prm, x) - np.exp(-x * x))
                      for x in np.linspace(0.5, 4.5, 200))
        assert err_all < 1e-3
        assert err_mid < 1e-5

    def test_derivative_consistent(self):
        r = np.linspace(0.0, 5.0, 120)
        v = np.exp(-r * r)
        prm = models.pack_spline(r, v)
        for x in (0.5, 1.3, 2.7):
            fd = (models.spline_eval(prm, x + 1e-6)
                  - models.spline_eval(prm, x - 1e-6)) / 2e-6
            assert models.spline_deriv(prm, x) == pytest.approx(fd, abs=1e-5)

    def test_vanishes_outside(self):
        prm = models.pack_spline([0.0, 1.0, 2.0], [0.3, 0.1, 0.0])
        assert models.spline_eval(prm, 5.0) == 0.0
        assert models.spline_deriv(prm, 5.0) == 0.0

    def test_kernel_paths_agree(self):
        r = np.linspace(0.0, 5.0, 60)
        v = 0.8 * np.exp(-r * r / 1.4)
        prm = models.pack_spline(r, v)
        y0 = np.array([-8.0, 0.7, 1.1, 0.0])
        out1 = kernels.propagate(models.RADIAL_SPLINE_2D, prm, y0, 1e4, 10.0,
                                 rtol=1e-9, atol=1e-12)
        out2 = pure.propagate(models.RADIAL_SPLINE_2D, prm, y0, 1e4, 10.0,
                              rtol=1e-9, atol=1e-12)
        assert out1[0] == out2[0]
        np.testing.assert_allclose(out1[2], out2[2], rtol=1e-8, atol=1e-8)
