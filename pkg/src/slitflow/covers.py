"""Branched double covers via the slit construction.

Two copies of the base are cut along the slit and cross-glued.  The slit's
chords are extended past interior endpoints to the polygon boundary by seam
chords (cut and immediately re-glued on the same sheet) so every cover face
stays a simple polygon.  The partition (Omega_1, Omega_2) induced by the
lifted slit pair is the pair of sheets.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .arrangement import Chord, subdivide_polygon
from .field import QuadExt, Vec2
from . import geom
from .slits import Slit, SlitError
from .surface import SurfaceError, TranslationSurface, validate


def _ray_exit(polygon, pos: Vec2, direction: Vec2) -> Vec2:
    """First boundary point of the ray pos + t*direction, t > 0."""
    best = None
    n = len(polygon)
    one = QuadExt(1, 0, pos.d)
    for e in range(n):
        a, b = polygon[e], polygon[(e + 1) % n]
        hit = geom.segment_intersection_param(pos, direction, a, b)
        if hit is None:
            continue
        t, sp = hit
        if t.sign() <= 0 or sp.sign() < 0 or (sp - one).sign() > 0:
            continue
        if best is None or (t - best).sign() < 0:
            best = t
    if best is None:
        raise SurfaceError("seam ray does not exit the polygon")  # pragma: no cover
    return pos + direction * best


@dataclass
class DoubleCover:
    base: TranslationSurface
    slit: Slit
    surface: TranslationSurface
    sheet_of_poly: list[int]
    base_poly_of: list[int]
    branch_classes: list[int]  # vertex class indices on the cover

    @property
    def omega_areas(self) -> tuple[QuadExt, QuadExt]:
        a0 = self.base.zero()
        a1 = self.base.zero()
        for i, poly in enumerate(self.surface.polygons):
            area = geom.polygon_area(poly)
            if self.sheet_of_poly[i] == 0:
                a0 = a0 + area
            else:
                a1 = a1 + area
        return a0, a1

    def deck_involution_ok(self) -> bool:
        """The sheet swap is a translation automorphism: combinatorial check."""
        swap = {}
        for i in range(len(self.surface.polygons)):
            j = self._partner_poly(i)
            if j is None:
                return False
            swap[i] = j
        for (p, e), (q, f) in self.surface.gluings.items():
            if self.surface.gluings.get((swap[p], e)) != (swap[q], f):
                return False
            if self.surface.polygons[p][e] != self.surface.polygons[swap[p]][e]:
                return False
        return True

    def _partner_poly(self, i: int) -> Optional[int]:
        sheet = self.sheet_of_poly[i]
        base_poly = self.base_poly_of[i]
        for j in range(len(self.surface.polygons)):
            if (
                j != i
                and self.base_poly_of[j] == base_poly
                and self.sheet_of_poly[j] == 1 - sheet
                and self.surface.polygons[j] == self.surface.polygons[i]
            ):
                return j
        return None


def build_cover(base: TranslationSurface, slit: Slit) -> DoubleCover:
    """The branched double cover induced by the slit."""
    if slit.surface is not base:
        raise SlitError("slit does not live on this surface")

    # Chords per polygon: slit pieces (cross-glued) and seam extensions
    # (same-sheet re-glued) past interior endpoints.
    chords_by_poly: dict[int, list[Chord]] = {}

    def add(poly: int, a: Vec2, b: Vec2, cid):
        chords_by_poly.setdefault(poly, []).append(Chord(a, b, cid))

    for si, seg in enumerate(slit.segments):
        add(seg.poly, seg.start, seg.end, ("slit", si))

    if slit.start_kind == "marked":
        poly = slit.start_poly
        exit_pt = _ray_exit(base.polygons[poly], slit.start_pos, -slit.holonomy)
        add(poly, slit.start_pos, exit_pt, ("seam", "start"))
    end_poly, end_pos = slit.end_point
    exit_pt = _ray_exit(base.polygons[end_poly], end_pos, slit.holonomy)
    add(end_poly, end_pos, exit_pt, ("seam", "end"))

    # Chord endpoints in edge interiors subdivide the partner edge too.
    extra: dict[int, list[Vec2]] = {}
    for p, chords in chords_by_poly.items():
        for ch in chords:
            for pt in (ch.a, ch.b):
                kind, e = base.locate_in_polygon(p, pt)
                if kind == "edge":
                    q, _f = base.partner(p, e)
                    extra.setdefault(q, []).append(
                        pt + base.gluing_translation(p, e)
                    )

    faces_by_poly = {
        p: subdivide_polygon(
            base.polygons[p], chords_by_poly.get(p, []), extra.get(p, ())
        )
        for p in range(len(base.polygons))
    }

    # Cover polygons: (sheet, base polygon, face index) in a fixed order.
    index: dict[tuple[int, int, int], int] = {}
    polygons = []
    sheet_of_poly = []
    base_poly_of = []
    for sheet in (0, 1):
        for p in sorted(faces_by_poly):
            for fi, face in enumerate(faces_by_poly[p]):
                index[(sheet, p, fi)] = len(polygons)
                polygons.append(list(face.vertices))
                sheet_of_poly.append(sheet)
                base_poly_of.append(p)

    # Boundary sub-edges by (polygon, original edge, interval key).
    sub_edges: dict[tuple, tuple[int, int, int]] = {}
    chord_sides: dict[tuple, tuple[int, int, int]] = {}
    for p, faces in faces_by_poly.items():
        for fi, face in enumerate(faces):
            for ti, tag in enumerate(face.tags):
                a, b = face.edge_endpoints(ti)
                kk = frozenset((a.key(), b.key()))
                if tag[0] == "boundary":
                    sub_edges[(p, tag[1], kk)] = (p, fi, ti)
                else:
                    _, cid, side = tag
                    chord_sides[(cid, kk, side)] = (p, fi, ti)

    gluings = []

    # Original gluings, within each sheet.
    matched = set()
    for (p, e, kk), (pp, fi, ti) in sub_edges.items():
        if (pp, fi, ti) in matched:
            continue
        q, f = base.gluings[(p, e)]
        t = base.gluing_translation(p, e)
        face = faces_by_poly[pp][fi]
        a, b = face.edge_endpoints(ti)
        kk2 = frozenset(((a + t).key(), (b + t).key()))
        other = sub_edges.get((q, f, kk2))
        if other is None:  # pragma: no cover
            raise SurfaceError(f"no partner interval for edge ({p},{e})")
        matched.add((pp, fi, ti))
        matched.add(other)
        for sheet in (0, 1):
            gluings.append(
                (
                    (index[(sheet, pp, fi)], ti),
                    (index[(sheet, other[0], other[1])], other[2]),
                )
            )

    # Chord gluings: slit pieces cross sheets, seams stay.
    done = set()
    for (cid, kk, side), (p, fi, ti) in chord_sides.items():
        if (cid, kk) in done:
            continue
        done.add((cid, kk))
        other = chord_sides.get((cid, kk, -side))
        if other is None:  # pragma: no cover
            raise SurfaceError(f"chord {cid} piece lacks its second side")
        q, fj, tj = other
        if cid[0] == "slit":
            for sheet in (0, 1):
                gluings.append(
                    (
                        (index[(sheet, p, fi)], ti),
                        (index[(1 - sheet, q, fj)], tj),
                    )
                )
        else:
            for sheet in (0, 1):
                gluings.append(
                    (
                        (index[(sheet, p, fi)], ti),
                        (index[(sheet, q, fj)], tj),
                    )
                )

    marked = {}
    for label, (p, pos) in base.marked_points.items():
        if label == slit.end_label or (
            slit.start_kind == "marked" and label == slit.start_label
        ):
            continue
        for sheet in (0, 1):
            placed = False
            for fi, face in enumerate(faces_by_poly[p]):
                if geom.point_in_polygon(face.vertices, pos) > 0:
                    marked[f"{label}#{sheet}"] = (index[(sheet, p, fi)], pos)
                    placed = True
                    break
            if not placed:
                raise SurfaceError(
                    f"marked point {label} lies on the cut locus of the cover"
                )

    cover = TranslationSurface(base.d, polygons, gluings, marked)

    branch_targets = [
        base.canonical_point_key(slit.start_poly, slit.start_pos),
        base.canonical_point_key(end_poly, end_pos),
    ]
    branch_classes = _find_branch_classes(base, cover, base_poly_of, branch_targets)

    return DoubleCover(
        base=base,
        slit=slit,
        surface=cover,
        sheet_of_poly=sheet_of_poly,
        base_poly_of=base_poly_of,
        branch_classes=branch_classes,
    )


def _find_branch_classes(base, cover, base_poly_of, targets) -> list[int]:
    out = []
    for target in targets:
        hits = set()
        for cls in cover.vertex_classes:
            for (cp, ci) in cls.corners:
                pos = cover.vertex_position((cp, ci))
                key = base.canonical_point_key(base_poly_of[cp], pos)
                if key == target:
                    hits.add(cls.index)
                    break
        if len(hits) != 1:
            raise SurfaceError(
                f"branch point does not lift to a single vertex class: {hits}"
            )  # pragma: no cover
        out.append(hits.pop())
    return out
