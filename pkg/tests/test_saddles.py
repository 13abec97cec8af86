import math
from fractions import Fraction

from slitflow.builders import build_double_pentagon, build_l_shaped, build_square_torus
from slitflow.cylinders import CylinderDecomposition, decompose, direction_key
from slitflow.field import QuadExt, Vec2
from slitflow.saddles import (
    connection_directions,
    saddle_connections,
    triangulated_surface,
)
from slitflow.surface import validate
from slitflow.tracing import trace


def torus_oracle(bound):
    """Brute force: primitive lattice vectors with |v| <= bound, canonical."""
    out = set()
    n = math.ceil(bound)
    for p in range(-n, n + 1):
        for q in range(-n, n + 1):
            if (p, q) == (0, 0) or math.gcd(abs(p), abs(q)) != 1:
                continue
            if p * p + q * q > bound * bound:
                continue
            if q > 0 or (q == 0 and p > 0):
                out.add((p, q))
    return out


class TestTriangulatedSurface:
    def test_preserves_structure(self):
        for s in (build_square_torus(), build_l_shaped(2, 2), build_double_pentagon()):
            t = triangulated_surface(s)
            sig_s = validate(s)
            sig_t = validate(t)
            assert sig_s == sig_t
            assert t.area == s.area


class TestTorusEnumeration:
    def test_bound_one(self):
        t = build_square_torus()
        scs = saddle_connections(t, 1)
        hols = {(int(sc.holonomy.x.a), int(sc.holonomy.y.a)) for sc in scs}
        assert hols == {(1, 0), (0, 1)}

    def test_bound_matches_lattice_oracle(self):
        t = build_square_torus()
        for bound in (1, 2, Fraction(5, 2), 3):
            scs = saddle_connections(t, bound)
            hols = {
                (
                    Fraction(sc.holonomy.x.a),
                    Fraction(sc.holonomy.y.a),
                )
                for sc in scs
            }
            expected = {(Fraction(p), Fraction(q)) for p, q in torus_oracle(bound)}
            assert hols == expected

    def test_retrace(self):
        t = build_square_torus()
        tri = triangulated_surface(t)
        for sc in saddle_connections(t, Fraction(5, 2)):
            traj = trace(
                tri,
                ("corner", sc.start_corner),
                sc.holonomy,
                max_param=QuadExt(1, 0, t.d),
            )
            assert traj.hit_node()
            assert traj.terminal_param == QuadExt(1, 0, t.d)
            end_pos = tri.vertex_position(sc.end_corner)
            assert (traj.terminal_point - end_pos).is_zero()


class TestLShape:
    def test_contains_edge_and_chord_connections(self):
        s = build_l_shaped(2, 2)
        scs = saddle_connections(s, 2)
        hols = {sc.holonomy.float_tuple() for sc in scs}
        assert (1.0, 0.0) in hols
        assert (0.0, 1.0) in hols
        assert (1.0, 1.0) in hols

    def test_lengths_within_bound(self):
        s = build_l_shaped(2, 3)
        for sc in saddle_connections(s, 2):
            assert float(sc.length2) <= 4 + 1e-9


class TestDoublePentagon:
    def test_every_direction_is_periodic(self):
        s = build_double_pentagon()
        dirs = connection_directions(s, 3)
        assert len(dirs) >= 5
        for u in dirs:
            dec = decompose(s, u)
            assert isinstance(dec, CylinderDecomposition)
            assert len(dec.cylinders) == 2
            assert len(dec.connections) == 3
            assert dec.total_cylinder_area() == s.area

    def test_horizontal_present(self):
        s = build_double_pentagon()
        keys = {direction_key(u) for u in connection_directions(s, 2)}
        assert direction_key(Vec2.of(1, 0, 5)) in keys

    def test_vertical_present_at_length_two_phi(self):
        # The vertical connection (apex to apex through both centers) has
        # length 2*phi ~ 3.236, so it appears only once the bound passes it.
        s = build_double_pentagon()
        keys = {direction_key(u) for u in connection_directions(s, Fraction(7, 2))}
        assert direction_key(Vec2.of(0, 1, 5)) in keys

    def test_enumeration_grows_with_bound(self):
        s = build_double_pentagon()
        n1 = len(saddle_connections(s, 2))
        n2 = len(saddle_connections(s, 3))
        assert n2 > n1 > 0
