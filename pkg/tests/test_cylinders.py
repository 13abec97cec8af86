from fractions import Fraction

import pytest

from slitflow.builders import (
    build_double_pentagon,
    build_l_shaped,
    build_square_torus,
    golden_l,
)
from slitflow.cylinders import (
    CylinderDecomposition,
    NotPeriodic,
    crossing_profile,
    decompose,
)
from slitflow.field import Mat2, QuadExt, Vec2
from slitflow.tracing import trace


def v2(s, x, y):
    return Vec2.of(Fraction(x), Fraction(y), s.d)


class TestTorus:
    def test_horizontal(self):
        t = build_square_torus()
        dec = decompose(t, v2(t, 1, 0))
        assert isinstance(dec, CylinderDecomposition)
        assert len(dec.cylinders) == 1
        c = dec.cylinders[0]
        assert c.width == QuadExt(1, 0, 2)
        assert c.height == QuadExt(1, 0, 2)
        assert c.area == QuadExt(1, 0, 2)
        assert len(dec.connections) == 1

    def test_diagonal(self):
        t = build_square_torus()
        dec = decompose(t, v2(t, 1, 1))
        assert isinstance(dec, CylinderDecomposition)
        assert len(dec.cylinders) == 1
        c = dec.cylinders[0]
        assert c.area == QuadExt(1, 0, 2)
        assert c.width * c.height == QuadExt(1, 0, 2)

    def test_irrational_slope_not_periodic(self):
        t = build_square_torus()
        u = Vec2(QuadExt(1, 0, 2), QuadExt(0, 1, 2))
        res = decompose(t, u, budget_length2=QuadExt(400, 0, 2))
        assert isinstance(res, NotPeriodic)


class TestLShape:
    def test_horizontal_two_cylinders(self):
        s = build_l_shaped(2, 2)
        dec = decompose(s, v2(s, 1, 0))
        assert isinstance(dec, CylinderDecomposition)
        assert len(dec.cylinders) == 2
        assert dec.total_cylinder_area() == s.area
        assert len(dec.connections) == 3
        # One self-gluing cylinder, one not.
        flags = sorted(c.self_gluing for c in dec.cylinders)
        assert flags == [False, True]
        dims = sorted(
            (float(c.width), float(c.height)) for c in dec.cylinders
        )
        assert dims == [(1.0, 1.0), (2.0, 1.0)]

    def test_vertical(self):
        s = build_l_shaped(2, 3)
        dec = decompose(s, v2(s, 0, 1))
        assert isinstance(dec, CylinderDecomposition)
        assert len(dec.cylinders) == 2
        assert dec.total_cylinder_area() == s.area

    def test_golden_horizontal(self):
        s = golden_l()
        dec = decompose(s, v2(s, 1, 0))
        assert isinstance(dec, CylinderDecomposition)
        assert len(dec.cylinders) == 2
        assert dec.total_cylinder_area() == s.area
        assert len(dec.connections) == 3
        assert sorted(c.self_gluing for c in dec.cylinders) == [False, True]

    def test_diagonal_periodic(self):
        s = build_l_shaped(2, 2)
        dec = decompose(s, v2(s, 1, 1))
        assert isinstance(dec, CylinderDecomposition)
        assert dec.total_cylinder_area() == s.area


class TestDoublePentagon:
    def test_horizontal(self):
        s = build_double_pentagon()
        dec = decompose(s, v2(s, 1, 0))
        assert isinstance(dec, CylinderDecomposition)
        assert len(dec.cylinders) == 2
        assert len(dec.connections) == 3
        assert dec.total_cylinder_area() == s.area
        assert sorted(c.self_gluing for c in dec.cylinders) == [False, True]

    def test_vertical(self):
        s = build_double_pentagon()
        dec = decompose(s, v2(s, 0, 1))
        assert isinstance(dec, CylinderDecomposition)
        assert len(dec.cylinders) == 2
        assert dec.total_cylinder_area() == s.area

    def test_edge_directions_periodic(self):
        s = build_double_pentagon()
        for e in range(5):
            u = s.edge_vector(0, e)
            dec = decompose(s, u)
            assert isinstance(dec, CylinderDecomposition)
            assert len(dec.cylinders) == 2
            assert len(dec.connections) == 3
            assert dec.total_cylinder_area() == s.area

    def test_generic_direction_not_periodic(self):
        s = build_double_pentagon()
        # Slope 100/99 is not a saddle-connection direction at small length;
        # use a modest budget so the test stays quick.
        res = decompose(
            s, v2(s, 99, 100), budget_length2=QuadExt(3000, 0, 5)
        )
        assert isinstance(res, NotPeriodic)


class TestEquivariance:
    def test_matrix_action_preserves_cylinder_areas(self):
        s = golden_l()
        m = Mat2.of([[1, 1], [0, 1]], s.d)
        u = v2(s, 1, 2)
        dec1 = decompose(s, u)
        s2 = s.transform(m)
        dec2 = decompose(s2, m * u)
        assert isinstance(dec1, CylinderDecomposition)
        assert isinstance(dec2, CylinderDecomposition)
        areas1 = sorted((c.area.a, c.area.b) for c in dec1.cylinders)
        areas2 = sorted((c.area.a, c.area.b) for c in dec2.cylinders)
        assert areas1 == areas2  # det = 1


class TestCrossingProfile:
    def test_torus_vertical_vs_horizontal(self):
        t = build_square_torus()
        dec = decompose(t, v2(t, 1, 0))
        traj = trace(t, ("corner", (0, 0)), v2(t, 0, 1), max_length2=9)
        assert traj.hit_node()
        prof = crossing_profile(dec, traj.segments, traj.holonomy)
        assert prof.k == 1
        assert prof.ell == 1
        assert prof.kappa == QuadExt(1, 0, 2)

    def test_torus_slope_two(self):
        t = build_square_torus()
        dec = decompose(t, v2(t, 1, 0))
        traj = trace(t, ("corner", (0, 0)), v2(t, 1, 2), max_length2=9)
        assert traj.hit_node()
        prof = crossing_profile(dec, traj.segments, traj.holonomy)
        assert prof.counts == {0: 2}

    def test_l_vertical_edge_sc(self):
        # The left edge of L(2,2) is a vertical saddle connection traveling
        # along polygon edges; its profile against the horizontal
        # decomposition must still satisfy the crossing identity.
        s = build_l_shaped(2, 2)
        dec = decompose(s, v2(s, 1, 0))
        traj = trace(s, ("corner", (0, 1)), v2(s, 0, 1), max_length2=100)
        assert traj.hit_node()
        prof = crossing_profile(dec, traj.segments, traj.holonomy)
        assert sum(prof.counts.values()) >= 1
        total = s.zero()
        for ci, n in prof.counts.items():
            total = total + prof.heights[ci] * n
        assert total == prof.transverse_holonomy

    def test_pentagon_vertical_vs_horizontal(self):
        s = build_double_pentagon()
        dec = decompose(s, v2(s, 1, 0))
        traj = trace(s, ("corner", (0, 3)), v2(s, 0, -1), max_length2=100)
        assert traj.hit_node()
        prof = crossing_profile(dec, traj.segments, traj.holonomy)
        total = s.zero()
        for ci, n in prof.counts.items():
            total = total + prof.heights[ci] * n
        assert total == prof.transverse_holonomy

    def test_parallel_rejected(self):
        t = build_square_torus()
        dec = decompose(t, v2(t, 1, 0))
        traj = trace(t, ("corner", (0, 0)), v2(t, 1, 0), max_length2=9)
        with pytest.raises(ValueError):
            crossing_profile(dec, traj.segments, traj.holonomy)
