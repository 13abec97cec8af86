from fractions import Fraction

import pytest

from slitflow.builders import build_double_pentagon, build_square_torus
from slitflow.covers import build_cover
from slitflow.cylinders import decompose
from slitflow.field import QuadExt, Vec2
from slitflow.slits import make_slit
from slitflow.surface import TranslationSurface, validate
from slitflow.tracing import Terminal, trace


def v2(s, x, y):
    return Vec2.of(Fraction(x), Fraction(y), s.d)


def torus_with_mark(x, y):
    t = build_square_torus()
    return TranslationSurface(
        t.d,
        t.polygons,
        t._gluing_pairs(),
        {"M": (0, v2(t, x, y))},
        t.marked_vertices,
    )


def torus_cover():
    t = torus_with_mark("1/3", "1/2")
    slit = make_slit(t, "M", v2(t, "1/3", "1/2"))
    return t, slit, build_cover(t, slit)


def billiard_cover():
    s = build_double_pentagon()
    yc = QuadExt(Fraction(1, 2), Fraction(1, 10), 5)
    slit = make_slit(s, "Q", Vec2(QuadExt(0, 0, 5), -(yc * 2)))
    return s, slit, build_cover(s, slit)


class TestTorusCover:
    def test_genus_two(self):
        t, slit, cover = torus_cover()
        sig = validate(cover.surface)
        assert sig.genus == 2
        # Branched over two regular points of the torus: angles 4pi, 4pi.
        assert sig.zero_orders == (1, 1)
        assert cover.surface.area == t.area * 2

    def test_branch_classes(self):
        t, slit, cover = torus_cover()
        assert len(cover.branch_classes) == 2
        for ci in cover.branch_classes:
            assert cover.surface.vertex_classes[ci].angle_turns == 2

    def test_omega_partition(self):
        t, slit, cover = torus_cover()
        a0, a1 = cover.omega_areas
        assert a0 == a1 == t.area

    def test_deck_involution(self):
        t, slit, cover = torus_cover()
        assert cover.deck_involution_ok()


class TestBilliardCover:
    def test_genus_four(self):
        s, slit, cover = billiard_cover()
        sig = validate(cover.surface)
        assert sig.genus == 4
        # Branched over the two regular centers: the 6pi zero lifts twice,
        # each branch point contributes a 4pi zero: signature (2, 2, 1, 1).
        assert sig.zero_orders == (2, 2, 1, 1)
        assert cover.surface.area == s.area * 2

    def test_two_branch_points(self):
        s, slit, cover = billiard_cover()
        assert len(cover.branch_classes) == 2
        for ci in cover.branch_classes:
            assert cover.surface.vertex_classes[ci].angle_turns == 2

    def test_equal_partition(self):
        s, slit, cover = billiard_cover()
        a0, a1 = cover.omega_areas
        assert a0 == a1 == s.area

    def test_deck_involution(self):
        s, slit, cover = billiard_cover()
        assert cover.deck_involution_ok()


class TestParityLifting:
    def test_core_curve_lift(self):
        # The horizontal core curve at height 1/4 on the marked torus crosses
        # the slit (from (0,0) to (1/3,1/2)) once: its lift must swap sheets
        # (trace on the cover does not close after one period).  The curve at
        # height 3/4 crosses zero times and closes.
        t, slit, cover = torus_cover()
        cs = cover.surface

        def lift_closes(y0: str) -> bool:
            # Start at a cover point over (1/100, y0) on sheet 0.
            base_pt = v2(t, "1/100", y0)
            start = None
            for i, poly in enumerate(cs.polygons):
                if cover.sheet_of_poly[i] == 0:
                    from slitflow import geom

                    if geom.point_in_polygon(poly, base_pt) > 0:
                        start = (i, base_pt)
                        break
            assert start is not None
            traj = trace(
                cs, start, v2(t, 1, 0), max_param=QuadExt(1, 0, 2)
            )
            assert traj.terminal == Terminal.BOUND
            end_poly = traj.terminal_poly
            same_sheet = cover.sheet_of_poly[end_poly] == 0
            same_point = (traj.terminal_point - base_pt).is_zero()
            return same_sheet and same_point

        assert not lift_closes("1/4")  # crosses the slit once
        assert lift_closes("3/4")  # misses the slit


class TestCoverValidation:
    def test_cover_polygons_are_simple(self):
        for make in (torus_cover, billiard_cover):
            _, _, cover = make()
            validate(cover.surface)  # raises on any defect
