from fractions import Fraction

import pytest

from slitflow.builders import (
    build_double_pentagon,
    build_l_shaped,
    build_square_torus,
    golden_l,
    is_veech_l_shaped,
)
from slitflow.field import Mat2, MixedFieldError, QuadExt, Vec2
from slitflow.surface import SurfaceError, TranslationSurface, validate


def shoelace_area(surface):
    # Independent oracle: sum of per-polygon shoelace areas computed inline.
    total = Fraction(0)
    for poly in surface.polygons:
        pts = [v.float_tuple() for v in poly]
        acc = 0.0
        for i in range(len(pts)):
            x1, y1 = pts[i]
            x2, y2 = pts[(i + 1) % len(pts)]
            acc += x1 * y2 - x2 * y1
        total += Fraction(acc).limit_denominator(10**6) / 2
    return float(total)


class TestTorus:
    def test_validate(self):
        t = build_square_torus()
        sig = validate(t)
        assert sig.genus == 1
        assert sig.zero_orders == ()
        assert t.area == QuadExt(1, 0, 2)

    def test_single_regular_node_class(self):
        t = build_square_torus()
        assert len(t.vertex_classes) == 1
        cls = t.vertex_classes[0]
        assert cls.angle_turns == 1
        assert not cls.is_cone
        assert t.is_node_class(cls)  # marked vertex


class TestLShaped:
    def test_l22(self):
        s = build_l_shaped(2, 2)
        sig = validate(s)
        assert sig.genus == 2
        assert sig.zero_orders == (2,)
        assert s.area == QuadExt(3, 0, 2)  # area = a + b - 1

    def test_area_matches_float_oracle(self):
        s = build_l_shaped(Fraction(5, 2), Fraction(7, 3))
        assert abs(float(s.area) - shoelace_area(s)) < 1e-6

    def test_golden(self):
        s = golden_l()
        sig = validate(s)
        assert sig.genus == 2
        assert sig.zero_orders == (2,)
        phi = QuadExt(Fraction(1, 2), Fraction(1, 2), 5)
        assert s.area == phi + phi - 1

    def test_single_cone_6pi(self):
        s = build_l_shaped(2, 2)
        assert len(s.vertex_classes) == 1
        assert s.vertex_classes[0].angle_turns == 3

    def test_degenerate_rejected(self):
        with pytest.raises(ValueError):
            build_l_shaped(1, 1)
        with pytest.raises(ValueError):
            build_l_shaped(Fraction(1, 2), 3)

    def test_mixed_fields_rejected(self):
        a = QuadExt(1, 1, 2)  # 1 + sqrt2
        b = QuadExt(1, 1, 3)  # 1 + sqrt3
        with pytest.raises(MixedFieldError):
            build_l_shaped(a, b)


class TestVeechCriterion:
    def test_rational_pairs(self):
        assert is_veech_l_shaped(2, 2)
        assert is_veech_l_shaped(Fraction(3, 2), Fraction(5, 2))

    def test_golden_pair(self):
        phi = QuadExt(Fraction(1, 2), Fraction(1, 2), 5)
        assert is_veech_l_shaped(phi, phi)  # x = y = 1/2, z = 1/2

    def test_non_veech(self):
        a = QuadExt(1, 1, 5)  # 1 + sqrt5: x = y = 1, x + y = 2
        assert not is_veech_l_shaped(a, a)

    def test_mixed_field_error(self):
        with pytest.raises(MixedFieldError):
            is_veech_l_shaped(QuadExt(1, 1, 2), QuadExt(1, 1, 3))

    def test_general_family(self):
        x, y, z = Fraction(1, 3), Fraction(2, 3), Fraction(1)
        a = QuadExt(x, z, 5)
        b = QuadExt(y, z, 5)
        assert is_veech_l_shaped(a, b)
        assert is_veech_l_shaped(b, a)  # symmetric in a, b

    def test_unequal_z_not_veech(self):
        a = QuadExt(Fraction(1, 2), 1, 5)
        b = QuadExt(Fraction(1, 2), 2, 5)
        assert not is_veech_l_shaped(a, b)


class TestDoublePentagon:
    def test_validate(self):
        s = build_double_pentagon()
        sig = validate(s)
        assert sig.genus == 2
        assert sig.zero_orders == (2,)

    def test_five_edge_pairs(self):
        s = build_double_pentagon()
        assert len(s.gluings) // 2 == 5

    def test_single_cone_6pi(self):
        s = build_double_pentagon()
        assert len(s.vertex_classes) == 1
        assert s.vertex_classes[0].angle_turns == 3
        assert len(s.vertex_classes[0].corners) == 10

    def test_marked_centers(self):
        s = build_double_pentagon()
        (pp, p), (pq, q) = s.marked_point("P"), s.marked_point("Q")
        assert pp == 0 and pq == 1
        kind, _ = s.locate_in_polygon(0, p)
        assert kind == "interior"
        # Q is the point reflection of P through (1/2, 0).
        assert (p + q) == Vec2.of(1, 0, 5)

    def test_area_matches_float_oracle(self):
        s = build_double_pentagon()
        assert abs(float(s.area) - shoelace_area(s)) < 1e-6


class TestSurfaceStructure:
    def test_gluing_translation_roundtrip(self):
        s = build_double_pentagon()
        for (p, e) in list(s.gluings):
            q, f = s.partner(p, e)
            t = s.gluing_translation(p, e)
            back = s.gluing_translation(q, f)
            assert (t + back).is_zero()
            a, b = s.edge_endpoints(p, e)
            c, d = s.edge_endpoints(q, f)
            assert a + t == d and b + t == c

    def test_vertex_holonomy_closes(self):
        # Developing once around any vertex class returns to the start:
        # the composition of gluing translations along the cycle vanishes.
        for s in (build_square_torus(), build_l_shaped(2, 3), build_double_pentagon()):
            for cls in s.vertex_classes:
                pos = s.vertex_position(cls.corners[0])
                cur = cls.corners[0]
                offset = Vec2.of(0, 0, s.d)
                for _ in cls.corners:
                    p, i = cur
                    n = len(s.polygons[p])
                    e = (p, (i - 1) % n)
                    offset = offset + s.gluing_translation(*e)
                    cur = s.next_corner_ccw(cur)
                assert cur == cls.corners[0]
                assert (s.vertex_position(cur) + offset - pos).is_zero()

    def test_transform(self):
        s = build_l_shaped(2, 2)
        m = Mat2.of([[1, 1], [0, 1]], s.d)
        t = s.transform(m)
        validate(t)
        assert t.area == s.area  # det 1
        m2 = Mat2.of([[2, 0], [0, 1]], s.d)
        assert s.transform(m2).area == s.area * 2

    def test_json_round_trip(self):
        for s in (build_square_torus(), golden_l(), build_double_pentagon()):
            obj = s.to_json_obj()
            s2 = TranslationSurface.from_json_obj(obj)
            assert s2.to_json_obj() == obj
            validate(s2)

    def test_bad_gluing_rejected(self):
        v = lambda x, y: Vec2.of(x, y, 2)
        square = [v(0, 0), v(1, 0), v(1, 1), v(0, 1)]
        with pytest.raises(SurfaceError):
            TranslationSurface(2, [square], [((0, 0), (0, 1)), ((0, 2), (0, 3))])

    def test_same_point_across_edge(self):
        s = build_square_torus()
        half = Fraction(1, 2)
        assert s.same_point(0, Vec2.of(half, 0, 2), 0, Vec2.of(half, 1, 2))
        assert not s.same_point(0, Vec2.of(half, 0, 2), 0, Vec2.of(half, half, 2))
