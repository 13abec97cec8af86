from fractions import Fraction

import pytest

from slitflow.builders import build_double_pentagon, build_l_shaped, build_square_torus
from slitflow.cylinders import decompose
from slitflow.field import QuadExt, Vec2
from slitflow.slits import (
    SlitError,
    locate_slit,
    make_slit,
    slit_carrier,
    slit_ratio,
    subcylinder_area,
    twist_slit,
)
from slitflow.surface import TranslationSurface


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


def pentagon_root_slit():
    s = build_double_pentagon()
    yc = QuadExt(Fraction(1, 2), Fraction(1, 10), 5)
    hol = Vec2(QuadExt(0, 0, 5), -(yc * 2))
    return s, make_slit(s, "Q", hol)


class TestMakeSlit:
    def test_torus_slit_from_vertex(self):
        t = torus_with_mark("1/3", "1/2")
        slit = make_slit(t, "M", v2(t, "1/3", "1/2"))
        assert slit.start_kind == "cone"  # marked vertex counts as singular
        assert slit.start_pos == v2(t, 0, 0)

    def test_pentagon_center_slit(self):
        s, slit = pentagon_root_slit()
        assert slit.start_kind == "marked"
        assert slit.start_label == "P"
        mp, mpos = slit.midpoint()
        # Midpoint is the bottom edge midpoint (a Weierstrass point).
        assert s.same_point(mp, mpos, 0, v2(s, "1/2", 0))

    def test_invalid_through_cone(self):
        # A slit pointing from M through the torus vertex and beyond fails.
        t = torus_with_mark("1/2", "1/2")
        with pytest.raises(SlitError):
            make_slit(t, "M", v2(t, 1, 1))

    def test_zero_holonomy_rejected(self):
        t = torus_with_mark("1/3", "1/2")
        with pytest.raises(SlitError):
            make_slit(t, "M", v2(t, 0, 0))


class TestCarrier:
    def test_pentagon_root_ratio(self):
        s, slit = pentagon_root_slit()
        car = slit_carrier(slit)
        assert car.kind == "saddle"
        # rho = |sigma| / |gamma| = 2*y_c / (2*phi) = 1/sqrt5 = sqrt5/5.
        assert car.ratio == QuadExt(0, Fraction(1, 5), 5)
        assert not car.ratio.is_rational()

    def test_half_saddle_ratio(self):
        # Mark the midpoint of the torus diagonal: the slit is half of the
        # saddle connection, ratio 1/2.
        t = torus_with_mark("1/2", "1/2")
        slit = make_slit(t, "M", v2(t, "1/2", "1/2"))
        car = slit_carrier(slit)
        assert car.kind == "saddle"
        assert car.ratio == QuadExt(Fraction(1, 2), 0, 2)

    def test_generic_direction_budget_zero(self):
        # Marked point placed so the slit direction has irrational slope:
        # never extends to a saddle connection; budget annotation, ratio 0.
        t = build_square_torus()
        s5 = QuadExt(0, Fraction(1, 4), 2)  # sqrt2/4: irrational coordinate
        surf = TranslationSurface(
            t.d,
            t.polygons,
            t._gluing_pairs(),
            {"M": (0, Vec2(QuadExt(Fraction(1, 3), 0, 2), s5))},
            t.marked_vertices,
        )
        slit = make_slit(surf, "M", Vec2(QuadExt(Fraction(1, 3), 0, 2), s5))
        car = slit_carrier(slit, budget_param=64)
        assert car.kind == "budget"
        assert car.ratio == surf.zero()
        assert slit_ratio(slit, budget_param=64) == surf.zero()


class TestTwist:
    def test_locate_in_cylinder(self):
        t = torus_with_mark("1/3", "1/2")
        slit = make_slit(t, "M", v2(t, "1/3", "1/2"))
        dec = decompose(t, v2(t, 1, 0))
        loc = locate_slit(dec, slit)
        assert loc is not None
        assert loc.cylinder == 0
        assert float(loc.y_high - loc.y_low) == pytest.approx(0.5)
        area = subcylinder_area(dec, loc)
        assert area == QuadExt(Fraction(1, 2), 0, 2)

    def test_twist_formula(self):
        # Twist in the full horizontal cylinder: holonomy gains (2, 0).
        t = torus_with_mark("1/3", "1/2")
        slit = make_slit(t, "M", v2(t, "1/3", "1/2"))
        dec = decompose(t, v2(t, 1, 0))
        out = twist_slit(slit, dec, 2)
        assert out.holonomy == v2(t, "7/3", "1/2")
        assert out.start_key() == slit.start_key()
        assert out.end_label == slit.end_label

    def test_twist_zero_is_identity(self):
        t = torus_with_mark("1/3", "1/2")
        slit = make_slit(t, "M", v2(t, "1/3", "1/2"))
        dec = decompose(t, v2(t, 1, 0))
        assert twist_slit(slit, dec, 0) is slit

    def test_odd_twist_rejected(self):
        t = torus_with_mark("1/3", "1/2")
        slit = make_slit(t, "M", v2(t, "1/3", "1/2"))
        dec = decompose(t, v2(t, 1, 0))
        with pytest.raises(SlitError):
            twist_slit(slit, dec, 1)

    def test_horizontal_decomposition_does_not_contain_center_slit(self):
        # The center slit crosses the horizontal spine at its Weierstrass
        # midpoint (the half-slit case), so no horizontal cylinder contains it.
        s, slit = pentagon_root_slit()
        dec = decompose(s, v2(s, 1, 0))
        assert locate_slit(dec, slit) is None

    def test_twisted_slit_ratio_changes(self):
        s, slit = pentagon_root_slit()
        dec = decompose(s, s.edge_vector(0, 1))  # contains the whole slit
        loc = locate_slit(dec, slit)
        assert loc is not None
        assert not loc.spans_full_height
        out = twist_slit(slit, dec, 2, loc)
        r0 = slit_ratio(slit)
        r1 = slit_ratio(out, budget_param=512)
        assert r1 != r0
        assert r1.sign() > 0

    def test_pentagon_slit_not_parallel_cylinder(self):
        # The vertical center slit against the vertical decomposition is
        # parallel: no containing cylinder.
        s, slit = pentagon_root_slit()
        dec = decompose(s, v2(s, 0, 1))
        assert locate_slit(dec, slit) is None
