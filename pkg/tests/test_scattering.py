"""Asymptote extraction, reference checks, deflection and the planar degree."""
import math

import numpy as np
import pytest

from twocenter import dynamics, scattering
from twocenter.errors import NonPhysicalError, TrappedTrajectoryError
from twocenter.kepler import KeplerOrbit
from twocenter.model import InvariantPoint, Params, PhaseState, ReferenceChoice


class TestExtractAsymptote:
    def test_free_flow_exact(self):
        params = Params(0.0, 0.0)
        q0 = np.array([200.0, 40.0, -30.0])
        p0 = np.array([-1.0, 0.1, 0.2])
        traj = dynamics.integrate(PhaseState(q0, p0), params, r_max=300.0)
        asym = scattering.extract_asymptote(traj, +1, tail_strength=0.0)
        np.testing.assert_allclose(asym.p_hat, p0, rtol=1e-12)
        h = 0.5 * p0 @ p0
        np.testing.assert_allclose(asym.q_perp, q0 - (q0 @ p0) * p0 / (2 * h),
                                   atol=1e-8)

    def test_pure_kepler_matches_conic(self):
        params = Params(0.0, 1.7, 1.0)
        s0 = PhaseState([800.0, 30.0, 60.0], [-math.sqrt(2.0), 0.0, -0.03])
        orbit = KeplerOrbit.from_state(s0, 1.7, params.center2)
        traj = dynamics.integrate(s0, params, t_max=1e6, r_max=1000.0, tol=1e-11)
        asym = scattering.extract_asymptote(traj, +1, tail_center=params.center2)
        p_hat, q_perp = orbit.asymptote(+1)
        np.testing.assert_allclose(asym.p_hat, p_hat, atol=1e-6)
        np.testing.assert_allclose(asym.q_perp, q_perp, atol=1e-6)
        assert asym.error < 1e-6

    def test_two_center_angular_momentum_relation(self, grav):
        s0 = PhaseState([900.0, 40.0, 100.0], [-1.3, 0.02, -0.1])
        traj = dynamics.integrate(s0, grav, t_max=1e6, r_max=1200.0, tol=1e-11)
        asym = scattering.extract_asymptote(traj, +1)
        lvec = np.cross(traj.positions[-1], traj.momenta[-1])
        ratio = (np.linalg.norm(asym.q_perp) * np.linalg.norm(asym.p_hat)
                 / np.linalg.norm(lvec))
        assert ratio == pytest.approx(1.0, abs=1e-6)

    def test_invariants_every_extraction(self, grav, rng):
        for _ in range(5):
            s0 = PhaseState(np.array([600.0, rng.uniform(-50, 50),
                                      rng.uniform(-50, 50)]),
                            np.array([-1.2, rng.uniform(-0.05, 0.05),
                                      rng.uniform(-0.05, 0.05)]))
            traj = dynamics.integrate(s0, grav, t_max=1e6, r_max=900.0)
            for side in (-1, 1):
                asym = scattering.extract_asymptote(traj, side)
                assert abs(asym.p_hat @ asym.q_perp) < 1e-6 * np.linalg.norm(asym.q_perp)
                h = dynamics.eval_integrals(s0, grav).h
                assert asym.p_hat @ asym.p_hat == pytest.approx(2 * h, rel=1e-6)

    def test_trapped_rejected(self, grav):
        s0 = PhaseState([0.0, 0.0, 3.0], [0.0, 0.0, -1.0])
        traj = dynamics.integrate(s0, grav, t_max=50.0, r_max=1e9)
        with pytest.raises(TrappedTrajectoryError):
            scattering.extract_asymptote(traj, +1)


class TestReferenceProperty:
    def test_valid_references_pass(self, grav):
        for ref in (ReferenceChoice.KEPLER_AT_O1, ReferenceChoice.KEPLER_AT_O2):
            fam = scattering.candidate_for(ref, grav)
            rep = scattering.reference_property_check(fam, grav, n_samples=12)
            assert rep.limit_mismatch < 1e-10
            assert rep.final_mismatch < 1e-5
            assert rep.monotone

    def test_combined_strength_at_origin_fails(self, grav):
        fam = scattering.KeplerFamily(grav.strength_sum, [0.0, 0.0, 0.0])
        rep = scattering.reference_property_check(fam, grav, n_samples=12)
        assert rep.limit_mismatch > 1e-2

    def test_free_flow_fails_for_unequal_strengths(self, grav):
        fam = scattering.KeplerFamily(0.0, [0.0, 0.0, 0.0])
        rep = scattering.reference_property_check(fam, grav, n_samples=12)
        assert rep.limit_mismatch > 1e-2

    def test_free_flow_passes_for_equal_strengths(self):
        params = Params(1.5, 1.5)
        fam = scattering.KeplerFamily(0.0, [0.0, 0.0, 0.0])
        rep = scattering.reference_property_check(fam, params, n_samples=12)
        assert rep.limit_mismatch < 1e-10

    def test_radius_stability(self, grav):
        fam = scattering.candidate_for(ReferenceChoice.KEPLER_AT_O2, grav)
        rep = scattering.reference_property_check(
            fam, grav, n_samples=8, radii=np.array([1e3, 4e3, 1.6e4]))
        assert rep.mismatch[1] <= rep.mismatch[0] * 1.05
        assert rep.mismatch[2] <= rep.mismatch[1] * 1.05

    def test_off_axis_probe_geometry(self):
        fam = scattering.KeplerFamily(1.0, [-0.5, 0.0, 0.3])
        orb = scattering.off_axis_probe(fam, h=1.0, z0=0.3)
        pp, qp = orb.asymptote(+1)
        pm, qm = orb.asymptote(-1)
        lz_out = float(np.cross(qp, pp)[2])
        lz_in = float(np.cross(qm, pm)[2])
        assert abs(lz_out) < 0.02
        assert abs(lz_in) == pytest.approx(math.sqrt(2.0) * 0.5, rel=0.05)


class TestDeflection:
    def test_self_reference_zero(self, grav):
        d = scattering.deflection_difference(InvariantPoint(1.0, 0.3, 4.0),
                                             grav, ReferenceChoice.SELF)
        assert d.value == 0.0

    def test_zero_l_rejected(self, grav):
        with pytest.raises(NonPhysicalError):
            scattering.deflection_difference(InvariantPoint(1.0, 0.0, 4.0), grav)

    def test_symmetric_case_free_reference_finite(self):
        # equal strengths admit the free flow as comparison system
        params = Params(1.5, 1.5)
        d = scattering.deflection_difference(
            InvariantPoint(1.0, 0.4, 4.2), params, ReferenceChoice.KEPLER_AT_O2,
            radii=(400.0, 800.0, 1600.0))
        assert math.isfinite(d.value)
        assert d.error < 5e-3

    def test_radius_extrapolation_consistent(self, grav):
        f = InvariantPoint(1.0, 0.3, 4.0)
        d1 = scattering.deflection_difference(f, grav, radii=(400.0, 800.0, 1600.0))
        d2 = scattering.deflection_difference(f, grav, radii=(600.0, 1200.0, 2400.0))
        assert d1.value == pytest.approx(d2.value, abs=5e-3)


class TestKnaufDegree:
    def test_zero_potential(self):
        spec = scattering.PotentialSpec("gaussian", (0.0, 1.0))
        sweep = scattering.knauf_degree_planar(spec, h=1.0, n_base=64)
        assert sweep.degree == 0

    def test_gaussian_above_and_below(self):
        spec = scattering.PotentialSpec("gaussian", (1.0, 1.0))
        assert scattering.knauf_degree_planar(spec, 1.5, n_base=256).degree == 0
        assert scattering.knauf_degree_planar(spec, 0.5, n_base=256).degree == 1

    def test_direction_independence(self):
        spec = scattering.PotentialSpec("gaussian", (1.0, 1.0))
        degs = {scattering.knauf_degree_planar(spec, 0.6, n_base=192,
                                               direction=d).degree
                for d in (0.0, 0.7, 2.1, 4.0)}
        assert degs == {1}

    def test_tabulated_matches_analytic(self):
        r = np.linspace(0.0, 6.0, 400)
        v = np.exp(-r * r)
        spec = scattering.PotentialSpec("radial-table", table=(tuple(r), tuple(v)))
        assert scattering.knauf_degree_planar(spec, 1.5, n_base=192).degree == 0
        assert scattering.knauf_degree_planar(spec, 0.5, n_base=192).degree == 1

    def test_collision_course_reported(self):
        spec = scattering.PotentialSpec("kepler", (1.0,))
        with pytest.raises(TrappedTrajectoryError):
            # odd symmetric grid contains b = 0, a head-on collision course
            scattering.knauf_degree_planar(spec, 0.5, n_base=41)

    def test_negative_energy_rejected(self):
        spec = scattering.PotentialSpec("gaussian", (1.0, 1.0))
        with pytest.raises(NonPhysicalError):
            scattering.knauf_degree_planar(spec, -1.0)
