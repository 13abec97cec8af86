"""Weierstrass points of genus-2 translation surfaces.

The hyperelliptic involution (derivative -I) fixes each cylinder of a
two-cylinder decomposition, swapping its boundary circles.  Its action on
each cylinder chart is (x, y) -> (c - x, h - y) with the shift c anchored on
the distinguished saddle connection:

* the self-gluing cylinder carries the Weierstrass saddle connection on both
  boundary circles, and the involution reflects it about its midpoint;
* the non-self-gluing cylinder's two boundary circles are single saddle
  connections exchanged (reversed) by the involution.

The six fixed points are the cone point, the midpoint of the Weierstrass
saddle connection, and two points on each cylinder core.  Existence of the
involution is certified by a -I membership check, and the construction is
cross-validated against a second direction.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .affine import verify_membership
from .cylinders import (
    CylinderDecomposition,
    SpineConnection,
    decompose,
)
from .field import Mat2, QuadExt, Vec2
from . import geom
from .surface import SurfaceError, TranslationSurface, validate


class NotHyperelliptic(ValueError):
    pass


def _direction_candidates(s: TranslationSurface):
    d = s.d
    yield Vec2.of(1, 0, d)
    yield Vec2.of(0, 1, d)
    yield Vec2.of(1, 1, d)
    yield Vec2.of(1, -1, d)
    seen = set()
    for p, poly in enumerate(s.polygons):
        for e in range(len(poly)):
            v = s.edge_vector(p, e)
            from .cylinders import direction_key

            k = direction_key(v)
            if k not in seen:
                seen.add(k)
                yield v


def _two_cylinder_decomposition(s: TranslationSurface) -> CylinderDecomposition:
    for u in _direction_candidates(s):
        dec = decompose(s, u)
        if isinstance(dec, CylinderDecomposition) and len(dec.cylinders) == 2:
            flags = sorted(c.self_gluing for c in dec.cylinders)
            if flags == [False, True] and len(dec.connections) == 3:
                return dec
    raise NotHyperelliptic(
        "no two-cylinder direction with H(2) boundary structure found"
    )


def _sc_chart_interval(
    dec: CylinderDecomposition, sc: SpineConnection, cylinder: int, side: str
):
    """Universal-chart x-interval (start, end) of the connection's occurrence
    on the given boundary ('bottom' = cylinder above the connection)."""
    s = dec.surface
    u = dec.direction
    cyl = dec.cylinders[cylinder]
    if not sc.segments:  # pragma: no cover
        raise SurfaceError("connection without segments")
    seg = sc.segments[0]
    a, b = seg.start, seg.end
    mid = Vec2((a.x + b.x) / 2, (a.y + b.y) / 2)
    # Candidate charts for the first piece: a chord is seen from both sides
    # within one polygon; an edge piece is seen from its polygon on one side
    # and from the partner polygon on the other.
    charts = [(seg.poly, a, mid)]
    if seg.kind == "edge":
        t = s.gluing_translation(seg.poly, seg.edge)
        q, _f = s.partner(seg.poly, seg.edge)
        charts.append((q, a + t, mid + t))
    target_y = dec.surface.zero() if side == "bottom" else cyl.height
    length = u.dot(sc.holonomy) / u.norm2()
    for poly, a_c, mid_c in charts:
        for cf in cyl.faces:
            if cf.poly != poly:
                continue
            if geom.point_in_polygon(cf.face.vertices, mid_c) != 0:
                continue
            y = (dec.frame * mid_c).y + cf.y_off
            if (y - target_y).sign() != 0:
                continue
            x_start = (dec.frame * a_c).x + cf.x_off
            return x_start, x_start + length
    raise SurfaceError(
        f"connection {sc.index} has no {side} occurrence on cylinder {cylinder}"
    )


def _chart_to_surface(
    dec: CylinderDecomposition, cylinder: int, x: QuadExt, y: QuadExt
) -> tuple[int, Vec2]:
    """Invert the cylinder chart: find (polygon, position) with the given
    universal-chart coordinates modulo the circumference."""
    cyl = dec.cylinders[cylinder]
    c = cyl.circumference_frame
    inv = dec.frame.inverse()
    for cf in cyl.faces:
        base = Vec2(x - cf.x_off, y - cf.y_off)
        # Universal-chart spread of faces is within a few circumferences.
        for k in range(-3, 4):
            cand = Vec2(base.x + c * k, base.y)
            pos = inv * cand
            if geom.point_in_polygon(cf.face.vertices, pos) >= 0:
                return cf.poly, pos
    raise SurfaceError(
        f"chart point ({float(x)}, {float(y)}) not found in cylinder {cylinder}"
    )


def _fixed_points_of_decomposition(dec: CylinderDecomposition):
    """Weierstrass candidates from one two-cylinder decomposition."""
    s = dec.surface
    u = dec.direction
    out = []

    sg = next(c for c in dec.cylinders if c.self_gluing)
    ns = next(c for c in dec.cylinders if not c.self_gluing)
    w_sc = None
    for i in sg.boundary_connections:
        sc = dec.connections[i]
        if sc.left_cylinder == sg.index and sc.right_cylinder == sg.index:
            w_sc = sc
            break
    if w_sc is None:
        raise NotHyperelliptic("self-gluing cylinder without a two-sided connection")

    # Midpoint of the Weierstrass saddle connection.
    half = w_sc.length_param(u) / 2
    out.append(w_sc.point_at_param(u, half))

    # Core points of the self-gluing cylinder: anchor on the two occurrences
    # of the Weierstrass connection.
    x0, x0e = _sc_chart_interval(dec, w_sc, sg.index, "bottom")
    x1, _ = _sc_chart_interval(dec, w_sc, sg.index, "top")
    c_shift = x0e + x1  # x0 + x1 + length
    for extra in (0, 1):
        x = c_shift / 2 + sg.circumference_frame * Fraction(extra, 2)
        out.append(_chart_to_surface(dec, sg.index, x, sg.height / 2))

    # Non-self-gluing cylinder: bottom and top circles are single
    # connections exchanged by the involution.
    bottom_sc = top_sc = None
    for i in ns.boundary_connections:
        sc = dec.connections[i]
        if sc.left_cylinder == ns.index and sc.right_cylinder != ns.index:
            bottom_sc = sc
        elif sc.right_cylinder == ns.index and sc.left_cylinder != ns.index:
            top_sc = sc
    if bottom_sc is None or top_sc is None:
        raise NotHyperelliptic("unexpected boundary structure on the free cylinder")
    xa, xae = _sc_chart_interval(dec, bottom_sc, ns.index, "bottom")
    xb, _ = _sc_chart_interval(dec, top_sc, ns.index, "top")
    c_shift = xae + xb
    for extra in (0, 1):
        x = c_shift / 2 + ns.circumference_frame * Fraction(extra, 2)
        out.append(_chart_to_surface(dec, ns.index, x, ns.height / 2))

    # The cone point itself.
    cone = [cls for cls in s.vertex_classes if cls.is_cone]
    corner = min(cone[0].corners)
    out.append((corner[0], s.vertex_position(corner)))
    return out


def weierstrass_points(s: TranslationSurface) -> list[tuple[int, Vec2]]:
    """The six fixed points of the hyperelliptic involution, exactly.

    Raises NotHyperelliptic when the surface has no -I affine automorphism
    or is not genus 2.
    """
    sig = validate(s)
    if sig.genus != 2:
        raise NotHyperelliptic(f"genus {sig.genus} surface")
    minus_i = Mat2.of([[-1, 0], [0, -1]], s.d)
    if not verify_membership(s, minus_i, respect_marked=False).is_automorphism:
        raise NotHyperelliptic("no affine automorphism with derivative -I")

    dec = _two_cylinder_decomposition(s)
    pts = _fixed_points_of_decomposition(dec)
    keyed = {}
    for p, pos in pts:
        keyed[s.canonical_point_key(p, pos)] = (p, pos)
    if len(keyed) != 6:
        raise SurfaceError(
            f"expected 6 Weierstrass points, found {len(keyed)}"
        )  # pragma: no cover

    # Cross-check against an independent direction when one exists.
    for u in _direction_candidates(s):
        from .cylinders import direction_key

        if direction_key(u) == direction_key(dec.direction):
            continue
        other = decompose(s, u)
        if not isinstance(other, CylinderDecomposition):
            continue
        if len(other.cylinders) != 2:
            continue
        if sorted(c.self_gluing for c in other.cylinders) != [False, True]:
            continue
        pts2 = _fixed_points_of_decomposition(other)
        keys2 = {s.canonical_point_key(p, pos) for p, pos in pts2}
        if keys2 != set(keyed):
            raise SurfaceError(
                "Weierstrass sets from two directions disagree"
            )  # pragma: no cover
        break

    return sorted(keyed.values(), key=lambda t: (t[0], t[1].key()))
