"""Exact planar predicates on Vec2 over a fixed quadratic field.

All tests are sign computations; no tolerance anywhere.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .field import QuadExt, Vec2


def same_direction(u: Vec2, v: Vec2) -> bool:
    """True iff u, v are positive multiples of each other (both nonzero)."""
    return u.cross(v).is_zero() and u.dot(v).sign() > 0


def ccw_arc_contains(s: Vec2, t: Vec2, r: Vec2) -> bool:
    """Is direction r in the half-open CCW arc (s, t]?

    The arc length is assumed in (0, 2*pi): s and t are not positive
    multiples of each other unless they bound a full turn, which callers
    never pass.
    """
    if same_direction(r, t):
        return True
    if same_direction(r, s):
        return False
    c = s.cross(t).sign()
    if c > 0:
        return s.cross(r).sign() > 0 and r.cross(t).sign() > 0
    if c < 0:
        return not (t.cross(r).sign() > 0 and r.cross(s).sign() > 0)
    # s, t opposite (arc of exactly pi)
    return s.cross(r).sign() > 0


def signed_area2(polygon: Sequence[Vec2]) -> QuadExt:
    """Twice the signed area (shoelace)."""
    d = polygon[0].d
    total = QuadExt(0, 0, d)
    n = len(polygon)
    for i in range(n):
        total = total + polygon[i].cross(polygon[(i + 1) % n])
    return total


def polygon_area(polygon: Sequence[Vec2]) -> QuadExt:
    two = signed_area2(polygon)
    return QuadExt(two.a / 2, two.b / 2, two.d)


def on_segment(a: Vec2, b: Vec2, p: Vec2) -> bool:
    """Is p on the closed segment [a, b]?"""
    ab = b - a
    ap = p - a
    if not ab.cross(ap).is_zero():
        return False
    t = ab.dot(ap)
    return t.sign() >= 0 and (t - ab.norm2()).sign() <= 0


def segment_interiors_intersect(a: Vec2, b: Vec2, c: Vec2, e: Vec2) -> bool:
    """Do the open segments (a,b) and (c,e) share a point?

    Collinear overlaps count; single-endpoint touches do not.
    """
    ab = b - a
    ce = e - c
    d1 = ab.cross(c - a).sign()
    d2 = ab.cross(e - a).sign()
    d3 = ce.cross(a - c).sign()
    d4 = ce.cross(b - c).sign()
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True
    if d1 == 0 and d2 == 0:
        # Collinear: check interval overlap of interiors along ab.
        ta = QuadExt(0, 0, a.d)
        tb = ab.norm2()
        tc = ab.dot(c - a)
        te = ab.dot(e - a)
        lo, hi = (tc, te) if (te - tc).sign() > 0 else (te, tc)
        return (max_q(lo, ta) - min_q(hi, tb)).sign() < 0
    return False


def max_q(u: QuadExt, v: QuadExt) -> QuadExt:
    return u if (u - v).sign() >= 0 else v


def min_q(u: QuadExt, v: QuadExt) -> QuadExt:
    return u if (u - v).sign() <= 0 else v


def segment_intersection_param(
    origin: Vec2, direction: Vec2, a: Vec2, b: Vec2
) -> Optional[tuple[QuadExt, QuadExt]]:
    """Parameters (t, s) with origin + t*direction = a + s*(b - a).

    None when direction is parallel to the segment.
    """
    ab = b - a
    denom = direction.cross(ab)
    if denom.is_zero():
        return None
    w = a - origin
    t = w.cross(ab) / denom
    s = w.cross(direction) / denom
    return t, s


def point_in_polygon(polygon: Sequence[Vec2], p: Vec2) -> int:
    """Exact location: +1 strictly inside, 0 on the boundary, -1 outside.

    Winding by crossing counting against a ray in direction (1, lambda) for a
    lambda avoiding all vertex directions from p; implemented as the standard
    upward crossing rule, exact because all comparisons are field signs.
    """
    n = len(polygon)
    inside = False
    for i in range(n):
        a, b = polygon[i], polygon[(i + 1) % n]
        if on_segment(a, b, p):
            return 0
        ay = (a.y - p.y).sign()
        by = (b.y - p.y).sign()
        if (ay > 0) != (by > 0):
            # Edge crosses the horizontal line through p; side of crossing.
            side = (b - a).cross(p - a).sign()
            if by - ay > 0:
                side = -side
            if side < 0:
                inside = not inside
    return 1 if inside else -1


def is_simple_polygon(polygon: Sequence[Vec2]) -> bool:
    n = len(polygon)
    if n < 3:
        return False
    if len({p.key() for p in polygon}) != n:
        return False
    for i in range(n):
        if (polygon[(i + 1) % n] - polygon[i]).is_zero():
            return False
    for i in range(n):
        a, b = polygon[i], polygon[(i + 1) % n]
        for j in range(i + 1, n):
            c, e = polygon[j], polygon[(j + 1) % n]
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            if adjacent:
                # Shared endpoint allowed; any further contact is not.
                if segment_interiors_intersect(a, b, c, e):
                    return False
                # Back-tracking spike: consecutive edges fold onto each other.
                if j == i + 1 and on_segment(c, e, a) and not (a - c).is_zero():
                    return False
            else:
                if segment_interiors_intersect(a, b, c, e):
                    return False
                for p, (u, v) in ((a, (c, e)), (b, (c, e)), (c, (a, b)), (e, (a, b))):
                    if on_segment(u, v, p) and not (p - u).is_zero() and not (p - v).is_zero():
                        return False
    return True


def convex_position(polygon: Sequence[Vec2]) -> bool:
    n = len(polygon)
    for i in range(n):
        a = polygon[i]
        b = polygon[(i + 1) % n]
        c = polygon[(i + 2) % n]
        if (b - a).cross(c - b).sign() < 0:
            return False
    return True


def _half_turn_index(v: Vec2) -> int:
    """0 for directions in [0, pi) measured from (1, 0), 1 for [pi, 2*pi)."""
    sy = v.y.sign()
    if sy > 0 or (sy == 0 and v.x.sign() > 0):
        return 0
    return 1


def compare_directions(u: Vec2, v: Vec2) -> int:
    """CCW angular comparison from the positive x-axis, exact.

    Parallel same-direction vectors compare equal; opposite directions fall
    into different half-turns.
    """
    hu, hv = _half_turn_index(u), _half_turn_index(v)
    if hu != hv:
        return -1 if hu < hv else 1
    return -u.cross(v).sign()
