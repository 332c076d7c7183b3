"""Core dynamics: integrals, transforms, separated momenta, integration."""
from fractions import Fraction

import numpy as np
import pytest

import oracles
from conftest import random_scattering_state
from twocenter import dynamics
from twocenter.errors import AxisDegeneracyError, CollisionProximityError
from twocenter.kepler import KeplerOrbit
from twocenter.model import InvariantPoint, Params, PhaseState, TerminationReason


class TestEvalIntegrals:
    def test_free_case(self):
        p = Params(0.0, 0.0, 1.0)
        f = dynamics.eval_integrals(PhaseState([1, 0, 0], [0, 1, 0]), p)
        assert f.h == pytest.approx(0.5, abs=1e-15)
        assert f.l == pytest.approx(1.0, abs=1e-15)
        assert f.g == pytest.approx(0.5, abs=1e-15)

    def test_on_axis_l_vanishes(self, grav, rng):
        for _ in range(20):
            z = rng.uniform(1.5, 5.0) * rng.choice([-1, 1])
            s = PhaseState([0, 0, z], rng.normal(size=3))
            assert dynamics.eval_integrals(s, grav).l == 0.0

    def test_against_bignum_oracle(self, grav):
        s = PhaseState([3.0, 0.0, 0.0], [0.0, 0.0, 1.0])
        f = dynamics.eval_integrals(s, grav)
        h, l, g = oracles.integrals_mp(s.q, s.p, 2.0, 1.0, 1.0)
        assert f.h == pytest.approx(h, rel=1e-14)
        assert f.l == pytest.approx(l, abs=1e-14)
        assert f.g == pytest.approx(g, rel=1e-14)
        # the radical terms cancel exactly at this point
        assert f.g == pytest.approx(5.0, abs=1e-14)

    def test_random_states_vs_oracle(self, grav, rng):
        for _ in range(50):
            s = random_scattering_state(rng, grav)
            f = dynamics.eval_integrals(s, grav)
            h, l, g = oracles.integrals_mp(s.q, s.p, grav.mu1, grav.mu2, grav.a)
            np.testing.assert_allclose([f.h, f.l, f.g], [h, l, g], rtol=1e-13,
                                       atol=1e-13)

    def test_collision_proximity_error(self, grav):
        s = PhaseState([0, 0, -1 + 1e-9], [0, 0, 1])
        with pytest.raises(CollisionProximityError):
            dynamics.eval_integrals(s, grav)


class TestProlate:
    def test_axis_point_coordinates(self):
        p = Params(2.0, 1.0, 1.0)
        xi, eta, _ = dynamics.prolate_coordinates(np.array([0.0, 0.0, 2.0]), p)
        assert xi == pytest.approx(2.0, abs=1e-14)
        assert eta == pytest.approx(1.0, abs=1e-14)

    def test_p_phi_equals_lz(self, grav, rng):
        for _ in range(25):
            s = random_scattering_state(rng, grav)
            ps = dynamics.cartesian_to_prolate(s, grav)
            assert ps.p_phi == pytest.approx(dynamics.eval_integrals(s, grav).l,
                                             rel=1e-12, abs=1e-12)

    def test_round_trip(self, grav, rng):
        for _ in range(25):
            s = random_scattering_state(rng, grav)
            ps = dynamics.cartesian_to_prolate(s, grav)
            back = dynamics.prolate_to_cartesian(ps, grav)
            np.testing.assert_allclose(back.q, s.q, rtol=1e-12, atol=1e-12)
            np.testing.assert_allclose(back.p, s.p, rtol=1e-12, atol=1e-12)

    def test_separated_energy_matches(self, grav, rng):
        # the separated-form energy agrees with the Cartesian one
        worst = 0.0
        for _ in range(10_000):
            q = rng.normal(0.0, 3.0, 3)
            if min(np.linalg.norm(q - [0, 0, -1]), np.linalg.norm(q - [0, 0, 1])) < 0.05:
                continue
            if q[0] ** 2 + q[1] ** 2 < 1e-6:
                continue
            s = PhaseState(q, rng.normal(0.0, 1.5, 3))
            ps = dynamics.cartesian_to_prolate(s, grav)
            h1 = dynamics.hamiltonian_prolate(ps, grav)
            h0 = dynamics.eval_integrals(s, grav).h
            worst = max(worst, abs(h1 - h0) / max(1.0, abs(h0)))
        assert worst < 1e-10

    def test_axis_momenta_rejected(self, grav):
        with pytest.raises(AxisDegeneracyError):
            dynamics.cartesian_to_prolate(PhaseState([0, 0, 3.0], [0, 0, 1.0]), grav)


class TestSeparatedMomentum:
    def test_eta_zero_l_zero(self, rng):
        for g in (0.5, 1.0, 3.0):
            f = InvariantPoint(h=1.0, l=0.0, g=g)
            v = dynamics.separated_momentum_sq("eta", 0.0, f, (3.0, 1.0))
            assert v == pytest.approx(2.0 * g, rel=1e-14)

    def test_xi_large_limit(self):
        f = InvariantPoint(h=1.3, l=0.7, g=2.0)
        v = dynamics.separated_momentum_sq("xi", 1e6, f, (3.0, 1.0))
        assert v == pytest.approx(2.0 * 1.3, rel=1e-5)

    def test_exact_fraction_oracle(self):
        # mu1=2, mu2=1, h=1, g=2, l=1/2, xi=2, exact rational arithmetic
        h, g, s = Fraction(1), Fraction(2), Fraction(3)
        l2 = Fraction(1, 4)
        xi = Fraction(2)
        num = (xi**2 - 1) * (2 * h * xi**2 + 2 * s * xi - 2 * g) - l2
        expect = num / (xi**2 - 1) ** 2
        f = InvariantPoint(1.0, 0.5, 2.0)
        v = dynamics.separated_momentum_sq("xi", 2.0, f, (3.0, 1.0))
        assert v == pytest.approx(float(expect), rel=1e-15)

    def test_even_in_l(self, rng):
        for _ in range(20):
            h, g = rng.uniform(0.2, 2), rng.uniform(-1, 4)
            l = rng.uniform(0.1, 1.5)
            x = rng.uniform(1.05, 3.0)
            fp = InvariantPoint(h, l, g)
            fm = InvariantPoint(h, -l, g)
            assert (dynamics.separated_momentum_sq("xi", x, fp, (3.0, 1.0))
                    == dynamics.separated_momentum_sq("xi", x, fm, (3.0, 1.0)))

    def test_pole_rejected(self):
        f = InvariantPoint(1.0, 0.5, 2.0)
        with pytest.raises(ValueError):
            dynamics.separated_momentum_sq("eta", 1.0, f, (3.0, 1.0))


class TestEquationsOfMotion:
    def test_free_flow_no_force(self):
        p = Params(0.0, 0.0)
        dq, dp = dynamics.equations_of_motion(PhaseState([1, 2, 3], [4, 5, 6]), p)
        np.testing.assert_array_equal(dp, 0.0)
        np.testing.assert_array_equal(dq, [4, 5, 6])

    def test_midplane_symmetry(self):
        p = Params(1.5, 1.5)
        s = PhaseState([2.0, 1.0, 0.0], [0, 0, 0])
        _, dp = dynamics.equations_of_motion(s, p)
        assert dp[2] == pytest.approx(0.0, abs=1e-15)

    def test_force_matches_gradient(self, grav, rng):
        for _ in range(15):
            s = random_scattering_state(rng, grav)
            _, dp = dynamics.equations_of_motion(s, grav)
            gv = oracles.grad_v_central(s.q, grav.mu1, grav.mu2, grav.a)
            np.testing.assert_allclose(dp, -gv, rtol=1e-6, atol=1e-6)


class TestIntegrate:
    def test_free_flow_exact(self):
        p = Params(0.0, 0.0)
        s0 = PhaseState([1.0, -2.0, 0.5], [0.3, 0.4, -0.1])
        traj = dynamics.integrate(s0, p, t_max=10.0, r_max=1e9)
        assert traj.reason is TerminationReason.TIME_LIMIT
        t_end = traj.times[-1]
        np.testing.assert_allclose(traj.positions[-1], s0.q + t_end * s0.p,
                                   rtol=1e-12, atol=1e-12)
        np.testing.assert_allclose(traj.momenta,
                                   np.broadcast_to(s0.p, traj.momenta.shape),
                                   rtol=0, atol=1e-14)

    def test_conservation_along_scattering_run(self, grav):
        s0 = PhaseState([5.0, 1.0, 2.0], [-1.2, 0.1, -0.4])
        traj = dynamics.integrate(s0, grav, r_max=2000.0, tol=1e-10)
        assert traj.reason is TerminationReason.RADIUS_REACHED
        assert dynamics.conservation_drift(traj) < 1e-8

    def test_drift_within_reported_tolerance(self, grav, rng):
        for _ in range(5):
            s0 = random_scattering_state(rng, grav)
            traj = dynamics.integrate(s0, grav, r_max=800.0, tol=1e-9)
            assert dynamics.conservation_drift(traj) < 10.0 * traj.rtol

    def test_pure_kepler_matches_closed_form(self):
        # mu2 = 0 reduces to a Kepler problem about the lower center
        params = Params(2.0, 0.0, 1.0)
        s0 = PhaseState([4.0, 0.0, 1.0], [-0.9, 0.25, -0.3])
        orbit = KeplerOrbit.from_state(s0, 2.0, params.center1)
        t_span = 12.0
        traj = dynamics.integrate(s0, params, t_max=t_span, r_max=1e9, tol=1e-11)
        t0 = orbit.time_of(s0)
        ref = orbit.state_at(t0 + traj.times[-1])
        np.testing.assert_allclose(traj.positions[-1], ref.q, rtol=0, atol=1e-6)
        np.testing.assert_allclose(traj.momenta[-1], ref.p, rtol=0, atol=1e-6)

    def test_collision_termination(self, grav):
        s0 = PhaseState([0.0, 0.0, 3.0], [0.0, 0.0, -1.0])  # aimed at the upper center
        traj = dynamics.integrate(s0, grav, t_max=100.0, r_max=1e9)
        assert traj.reason is TerminationReason.COLLISION
        r2 = np.linalg.norm(traj.positions[-1] - [0, 0, 1])
        assert r2 < 1e-3

    def test_timestamps_increase(self, grav):
        s0 = PhaseState([5.0, 1.0, 2.0], [-1.0, 0.1, -0.3])
        traj = dynamics.integrate(s0, grav, r_max=100.0)
        assert np.all(np.diff(traj.times) > 0)


class TestFiberState:
    def test_invariants_reproduced(self, grav, rng):
        for _ in range(20):
            h = rng.uniform(0.3, 2.0)
            g = rng.uniform(h - 0.2, h + 3.5)
            l = rng.uniform(0.05, 0.6)
            f = InvariantPoint(h, l, g)
            try:
                s = dynamics.fiber_state(f, grav, xi0=40.0)
            except Exception:
                continue
            got = dynamics.eval_integrals(s, grav)
            np.testing.assert_allclose(got.as_tuple(), f.as_tuple(),
                                       rtol=1e-9, atol=1e-9)
