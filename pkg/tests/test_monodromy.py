"""Loop machinery and monodromy matrices beyond the acceptance presets."""
import numpy as np
import pytest

from twocenter import monodromy
from twocenter.errors import LoopGeometryError
from twocenter.model import Params, ReferenceChoice


class TestLoopPath:
    def test_crossings(self):
        loop = monodromy.LoopPath(1.0, 2.0, 0.5, 0.2)
        assert loop.crossings() == (1.5, 2.5)

    def test_bad_axes_rejected(self):
        with pytest.raises(LoopGeometryError):
            monodromy.LoopPath(1.0, 2.0, -0.5, 0.2)

    def test_enclosed_lines(self, grav):
        loop = monodromy.LoopPath(1.0, 2.0, 0.5, 0.2)
        assert loop.enclosed_lines(grav) == (2,)
        loop = monodromy.LoopPath(1.0, 1.0, 1.5, 0.2)
        assert loop.enclosed_lines(grav) == (1, 2)

    def test_loop_around_lines_rejects_overlap(self, grav):
        with pytest.raises(LoopGeometryError):
            monodromy.loop_around_lines(grav, 1.0, (1,), dg_margin=2.5)

    def test_validation_catches_critical_contact(self, grav):
        # crossings sit closer to the neighboring lines than the margin
        loop = monodromy.LoopPath(1.0, 2.0, 1.98, 0.2)
        with pytest.raises(LoopGeometryError):
            monodromy.validate_loop(loop, grav)

    def test_negative_energy_rejected(self, grav):
        with pytest.raises(LoopGeometryError):
            monodromy.validate_loop(monodromy.LoopPath(-0.5, 2.0, 0.3, 0.2), grav)


class TestMatrices:
    def test_shape_invariance(self, grav):
        """Three different loop shapes around the same line agree."""
        results = []
        for dg, dl in ((0.4, 0.1), (0.6, 0.25), (0.25, 0.35)):
            loop = monodromy.LoopPath(1.0, 2.0, dg, dl)
            results.append(monodromy.monodromy_matrix(
                loop, grav, ReferenceChoice.KEPLER_AT_O2))
        assert all(r.mn == results[0].mn for r in results)
        assert results[0].mn == (-1, 1)

    def test_orientation_inverts(self, grav):
        fwd = monodromy.monodromy_matrix(
            monodromy.LoopPath(1.0, 2.0, 0.5, 0.2, orientation=1), grav,
            ReferenceChoice.KEPLER_AT_O2)
        bwd = monodromy.monodromy_matrix(
            monodromy.LoopPath(1.0, 2.0, 0.5, 0.2, orientation=-1), grav,
            ReferenceChoice.KEPLER_AT_O2)
        assert np.array_equal(fwd.matrix @ bwd.matrix, np.eye(3, dtype=int))

    def test_composite_equals_product(self, grav):
        ref = ReferenceChoice.KEPLER_AT_O2
        r1 = monodromy.monodromy_matrix(monodromy.LoopPath(1.0, 0.0, 0.12, 0.1),
                                        grav, ref)
        r2 = monodromy.monodromy_matrix(monodromy.LoopPath(1.0, 2.0, 0.5, 0.1),
                                        grav, ref)
        both = monodromy.loop_around_lines(grav, 1.0, (1, 2), dg_margin=0.15,
                                           dl=0.25)
        r12 = monodromy.monodromy_matrix(both, grav, ref)
        assert np.array_equal(r12.matrix, r1.matrix @ r2.matrix)

    def test_unipotent_determinant(self, grav):
        res = monodromy.monodromy_matrix(monodromy.LoopPath(1.0, 4.0, 0.5, 0.2),
                                         grav, ReferenceChoice.KEPLER_AT_O1)
        m = res.matrix
        assert round(float(np.linalg.det(m))) == 1
        assert np.array_equal(np.diag(m), [1, 1, 1])
        assert m[1, 0] == m[2, 0] == m[2, 1] == 0

    def test_residual_small(self, grav):
        res = monodromy.monodromy_matrix(monodromy.LoopPath(1.0, 4.0, 0.5, 0.2),
                                         grav, ReferenceChoice.KEPLER_AT_O2)
        assert res.residual < 1e-4
        assert res.reliable


class TestTableMachinery:
    def test_line_clusters_generic(self, grav):
        assert monodromy.line_clusters(grav) == [(1,), (2,), (3,)]

    def test_line_clusters_kepler(self):
        assert monodromy.line_clusters(Params(2.0, 0.0)) == [(1,), (2, 3)]

    def test_line_clusters_free(self):
        assert monodromy.line_clusters(Params(0.0, 0.0)) == [(1, 2, 3)]

    def test_antisymmetric_ordering(self):
        # the third line sits between the first and second here
        assert monodromy.line_clusters(Params(2.0, -2.0)) == [(1,), (3,), (2,)]

    def test_rows_have_labels(self, grav):
        rows = monodromy.table_rows(grav, ReferenceChoice.KEPLER_AT_O2, h=1.0,
                                    dg_margin=0.12, dl=0.1)
        assert [r.label for r in rows] == ["gamma1", "gamma2", "gamma3"]
