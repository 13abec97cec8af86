from fractions import Fraction

import pytest

from slitflow.arrangement import Chord, Face, subdivide_polygon
from slitflow.field import QuadExt, Vec2


def v(x, y, d=2):
    return Vec2.of(Fraction(x), Fraction(y), d)


def square():
    return [v(0, 0), v(1, 0), v(1, 1), v(0, 1)]


def total_area(faces):
    s = faces[0].area()
    for f in faces[1:]:
        s = s + f.area()
    return s


class TestSubdivide:
    def test_no_chords(self):
        faces = subdivide_polygon(square(), [])
        assert len(faces) == 1
        assert faces[0].area() == QuadExt(1, 0, 2)
        assert [t[0] for t in faces[0].tags] == ["boundary"] * 4

    def test_single_diagonal(self):
        faces = subdivide_polygon(square(), [Chord(v(0, 0), v(1, 1), "d")])
        assert len(faces) == 2
        assert total_area(faces) == QuadExt(1, 0, 2)
        sides = sorted(
            t[2] for f in faces for t in f.tags if t[0] == "chord"
        )
        assert sides == [-1, 1]

    def test_crossing_diagonals(self):
        faces = subdivide_polygon(
            square(),
            [Chord(v(0, 0), v(1, 1), "d1"), Chord(v(1, 0), v(0, 1), "d2")],
        )
        assert len(faces) == 4
        assert total_area(faces) == QuadExt(1, 0, 2)
        for f in faces:
            assert f.area() == QuadExt(Fraction(1, 4), 0, 2)

    def test_parallel_chords(self):
        faces = subdivide_polygon(
            square(),
            [
                Chord(v("1/3", 0), v("1/3", 1), "c1"),
                Chord(v("2/3", 0), v("2/3", 1), "c2"),
            ],
        )
        assert len(faces) == 3
        assert total_area(faces) == QuadExt(1, 0, 2)

    def test_chain_with_interior_node(self):
        # Two collinear chords meeting at an interior point (slit + seam).
        faces = subdivide_polygon(
            square(),
            [
                Chord(v(0, "1/2"), v("1/2", "1/2"), "slit"),
                Chord(v("1/2", "1/2"), v(1, "1/2"), "seam"),
            ],
        )
        assert len(faces) == 2
        assert total_area(faces) == QuadExt(1, 0, 2)
        for f in faces:
            assert f.area() == QuadExt(Fraction(1, 2), 0, 2)
            ids = {t[1] for t in f.tags if t[0] == "chord"}
            assert ids == {"slit", "seam"}

    def test_chord_ending_in_interior(self):
        # A chain that enters the interior and comes back: the face walk
        # goes around the slit tip.
        faces = subdivide_polygon(
            square(),
            [Chord(v(0, "1/2"), v("1/2", "1/2"), "s")],
        )
        assert len(faces) == 1
        f = faces[0]
        assert f.area() == QuadExt(1, 0, 2)
        # The slit contributes both sides to the single face boundary.
        chord_tags = [t for t in f.tags if t[0] == "chord"]
        assert len(chord_tags) == 2
        assert {t[2] for t in chord_tags} == {1, -1}

    def test_chords_sharing_boundary_vertex(self):
        faces = subdivide_polygon(
            square(),
            [
                Chord(v(0, 0), v(1, "1/2"), "a"),
                Chord(v(0, 0), v("1/2", 1), "b"),
            ],
        )
        assert len(faces) == 3
        assert total_area(faces) == QuadExt(1, 0, 2)

    def test_overlapping_chords_rejected(self):
        with pytest.raises(ValueError):
            subdivide_polygon(
                square(),
                [
                    Chord(v(0, "1/2"), v(1, "1/2"), "a"),
                    Chord(v("1/4", "1/2"), v("3/4", "1/2"), "b"),
                ],
            )

    def test_nonconvex_polygon(self):
        lshape = [v(0, 0), v(2, 0), v(2, 1), v(1, 1), v(1, 2), v(0, 2)]
        faces = subdivide_polygon(lshape, [Chord(v(0, 1), v(1, 1), "c")])
        assert len(faces) == 2
        assert total_area(faces) == QuadExt(3, 0, 2)

    def test_irrational_chords(self):
        d = 5
        s5 = QuadExt(0, 1, d)
        quarter = QuadExt(Fraction(1, 4), 0, d)
        sq = [Vec2.of(0, 0, d), Vec2.of(1, 0, d), Vec2.of(1, 1, d), Vec2.of(0, 1, d)]
        p = Vec2(s5 / 4, quarter)  # interior: sqrt5/4 ~ 0.559
        faces = subdivide_polygon(
            sq,
            [
                Chord(Vec2.of(0, 0, d), p, "s1"),
                Chord(p, Vec2.of(1, 1, d), "s2"),
            ],
        )
        assert total_area(faces) == QuadExt(1, 0, d)
        assert len(faces) == 2
