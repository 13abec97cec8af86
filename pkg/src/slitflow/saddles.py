"""Complete saddle-connection enumeration up to a length bound.

Breadth-first search over sight windows: the surface is triangulated (so
every visibility step is convex), each node corner germ opens a cone of
directions, and the cone is pushed across triangle edges while it can still
reach a point within the length bound.  Every decision is an exact sign.

Requires every vertex class to be a node (cone point or marked vertex),
which holds for all base surfaces this package builds; enumeration is not
defined on complexes with silent flat vertices.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .delaunay import triangulate_polygon
from .field import QuadExt, Vec2
from . import geom
from .surface import Corner, SurfaceError, TranslationSurface
from .tracing import trace

MAX_STATES = 2_000_000


@dataclass(frozen=True)
class SaddleConnection:
    holonomy: Vec2  # canonical: upper half-plane or positive x-axis
    start_corner: Corner  # germ (on the triangulated model) of +holonomy
    end_corner: Corner
    word: tuple  # crossed edges of the triangulated model, start to end

    @property
    def length2(self) -> QuadExt:
        return self.holonomy.norm2()


def triangulated_surface(s: TranslationSurface) -> TranslationSurface:
    """Triangle-by-triangle copy of s (marked interior points dropped)."""
    polys: list[list[Vec2]] = []
    gluings: list[tuple] = []
    boundary_slot: dict[tuple[int, int], tuple[int, int]] = {}
    pending: dict = {}
    for p, poly in enumerate(s.polygons):
        pts = list(poly)
        n = len(pts)
        for (i0, i1, i2) in triangulate_polygon(pts):
            ti = len(polys)
            polys.append([pts[i0], pts[i1], pts[i2]])
            corners = (i0, i1, i2)
            for e in range(3):
                u, v = corners[e], corners[(e + 1) % 3]
                if (u + 1) % n == v:
                    boundary_slot[(p, u)] = (ti, e)
                else:
                    key = (p, frozenset((u, v)))
                    if key in pending:
                        gluings.append((pending.pop(key), (ti, e)))
                    else:
                        pending[key] = (ti, e)
    if pending:  # pragma: no cover
        raise SurfaceError("unmatched diagonals during triangulation")
    for (p, e), slot in boundary_slot.items():
        q, f = s.gluings[(p, e)]
        other = boundary_slot[(q, f)]
        if slot < other:
            gluings.append((slot, other))
    marked_vertices = {}
    for label, (p, i) in s.marked_vertices.items():
        # Find a triangle corner at the same position in the same polygon.
        pos = s.vertex_position((p, i))
        found = None
        for ti, tri in enumerate(polys):
            for k, v in enumerate(tri):
                if (v - pos).is_zero():
                    found = (ti, k)
                    break
            if found:
                break
        marked_vertices[label] = found
    return TranslationSurface(s.d, polys, gluings, {}, marked_vertices)


def _cone_intersect(r1: Vec2, l1: Vec2, r2: Vec2, l2: Vec2):
    """Intersection of two open cones (each of angle < pi), or None."""
    r = r2 if r1.cross(r2).sign() > 0 else r1
    l = l2 if l2.cross(l1).sign() > 0 else l1
    if r.cross(l).sign() > 0:
        return (r, l)
    return None


def _in_open_cone(r: Vec2, l: Vec2, u: Vec2) -> bool:
    return r.cross(u).sign() > 0 and u.cross(l).sign() > 0


def _min_dist2_on_segment(a: Vec2, b: Vec2, r: Vec2, l: Vec2) -> Optional[QuadExt]:
    """Min |x|^2 over x in segment [a,b] with direction(x) in the closed cone.

    None when the cone misses the segment entirely.
    """
    candidates: list[Vec2] = []
    for p in (a, b):
        if not p.is_zero() and (
            r.cross(p).sign() >= 0 and p.cross(l).sign() >= 0
        ):
            candidates.append(p)
    ab = b - a
    # Perpendicular foot.
    n2 = ab.norm2()
    t = -ab.dot(a) / n2
    if t.sign() > 0 and (t - QuadExt(1, 0, a.d)).sign() < 0:
        foot = a + ab * t
        if not foot.is_zero() and r.cross(foot).sign() >= 0 and foot.cross(l).sign() >= 0:
            candidates.append(foot)
    # Cone boundary rays crossing the segment.
    for ray in (r, l):
        hit = geom.segment_intersection_param(
            Vec2(QuadExt(0, 0, a.d), QuadExt(0, 0, a.d)), ray, a, b
        )
        if hit is None:
            continue
        t_ray, sp = hit
        if t_ray.sign() > 0 and sp.sign() >= 0 and (sp - QuadExt(1, 0, a.d)).sign() <= 0:
            candidates.append(a + ab * sp)
    best = None
    for p in candidates:
        d2 = p.norm2()
        if best is None or (d2 - best).sign() < 0:
            best = d2
    return best


def _split_sector(a: Vec2, b: Vec2):
    """Split the CCW sector (a, b) into open cones of angle < pi and rays."""
    cones = []
    rays = []
    cur = a
    guard = 0
    while True:
        guard += 1
        if guard > 8:  # pragma: no cover
            raise SurfaceError("sector split failed")
        c = cur.cross(b)
        if c.sign() > 0 and cur.dot(b).sign() >= 0:
            # Angle <= pi/2 < pi: done... (any acute/right cone is fine)
            cones.append((cur, b))
            return cones, rays
        if c.sign() > 0 and cur.dot(b).sign() < 0:
            # Angle in (pi/2, pi): still < pi, fine as one cone.
            cones.append((cur, b))
            return cones, rays
        m = cur.perp()
        cones.append((cur, m))
        rays.append(m)
        cur = m


def _canonical(hol: Vec2) -> Vec2:
    sy = hol.y.sign()
    if sy < 0 or (sy == 0 and hol.x.sign() < 0):
        return -hol
    return hol


def saddle_connections(
    s: TranslationSurface, length_bound, max_states: int = MAX_STATES
) -> list[SaddleConnection]:
    """All saddle connections with |holonomy| <= length_bound, exactly once.

    Connections join node vertex classes (cone points, marked vertices) with
    none in their interior; canonical orientation is the upper half-plane.
    """
    if isinstance(length_bound, QuadExt):
        bound2 = length_bound * length_bound
    else:
        bound2 = QuadExt(length_bound, 0, s.d) * QuadExt(length_bound, 0, s.d)

    t = triangulated_surface(s)
    for cls in t.vertex_classes:
        if not t.is_node_class(cls):
            raise SurfaceError(
                "saddle connection enumeration requires all vertex classes "
                "to be cone points or marked vertices"
            )

    found: dict[frozenset, SaddleConnection] = {}

    def emit(start: Corner, end: Corner, hol: Vec2, word: tuple):
        key = frozenset(((start, hol.key()), (end, (-hol).key())))
        if key in found:
            return
        if _canonical(hol) == hol:
            found[key] = SaddleConnection(hol, start, end, word)
        else:
            rev = tuple((t.gluings[e]) for e in reversed(word))
            found[key] = SaddleConnection(-hol, end, start, rev)

    # Edge connections: one per gluing pair.
    done_pairs = set()
    for (p, e), (q, f) in t.gluings.items():
        if frozenset(((p, e), (q, f))) in done_pairs:
            continue
        done_pairs.add(frozenset(((p, e), (q, f))))
        hol = t.edge_vector(p, e)
        if (hol.norm2() - bound2).sign() > 0:
            continue
        n = len(t.polygons[p])
        key = frozenset((("edge", (p, e)), ("edge", (q, f))))
        if key not in found:
            start = (p, e)
            end = (p, (e + 1) % n)
            ch = _canonical(hol)
            if ch == hol:
                found[key] = SaddleConnection(hol, start, end, ())
            else:
                nq = len(t.polygons[q])
                found[key] = SaddleConnection(ch, (q, f), (q, (f + 1) % nq), ())

    # Window BFS from every node corner germ.
    states = 0
    for cls in t.vertex_classes:
        for corner in cls.corners:
            a, b = t.corner_sector(corner)
            cones, rays = _split_sector(a, b)
            origin = t.vertex_position(corner)

            for m in rays:
                traj = trace(t, ("corner", corner), m, max_length2=bound2)
                if traj.hit_node() and not any(
                    seg.kind == "edge" for seg in traj.segments
                ):
                    end_corner = (traj.terminal_poly, _corner_of(t, traj))
                    emit(corner, end_corner, traj.holonomy, ())

            stack = []
            p0 = corner[0]
            tau0 = Vec2(QuadExt(0, 0, s.d), QuadExt(0, 0, s.d)) - origin
            for (cr, cl) in cones:
                stack.append((p0, tau0, cr, cl, None, ()))

            while stack:
                states += 1
                if states > max_states:
                    raise SurfaceError("saddle connection search budget exhausted")
                poly, tau, cr, cl, entry, word = stack.pop()
                pts = t.polygons[poly]
                n = len(pts)
                # Vertices visible in the open cone.
                for vi in range(n):
                    pos = pts[vi] + tau
                    if pos.is_zero():
                        continue
                    if not _in_open_cone(cr, cl, pos):
                        continue
                    if (pos.norm2() - bound2).sign() > 0:
                        continue
                    blocked = False
                    for vj in range(n):
                        if vj == vi:
                            continue
                        other = pts[vj] + tau
                        if other.is_zero():
                            continue
                        if (
                            pos.cross(other).is_zero()
                            and pos.dot(other).sign() > 0
                            and (other.norm2() - pos.norm2()).sign() < 0
                        ):
                            blocked = True
                            break
                    if not blocked:
                        emit(corner, (poly, vi), pos, word)
                # Push through edges.
                for e in range(n):
                    if entry is not None and e == entry:
                        continue
                    ea = pts[e] + tau
                    eb = pts[(e + 1) % n] + tau
                    c = ea.cross(eb)
                    if c.is_zero():
                        continue
                    if c.sign() > 0:
                        sub = _cone_intersect(cr, cl, ea, eb)
                    else:
                        sub = _cone_intersect(cr, cl, eb, ea)
                    if sub is None:
                        continue
                    mind2 = _min_dist2_on_segment(ea, eb, sub[0], sub[1])
                    if mind2 is None or (mind2 - bound2).sign() > 0:
                        continue
                    q, f = t.gluings[(poly, e)]
                    # Partner-chart coords y develop at y - t_glue + tau.
                    tshift = t.gluing_translation(poly, e)
                    stack.append(
                        (q, tau - tshift, sub[0], sub[1], f, word + ((poly, e),))
                    )

    return sorted(
        found.values(),
        key=lambda sc: (
            sc.length2.a,
            sc.length2.b,
            sc.holonomy.key(),
            sc.start_corner,
        ),
    )


def _corner_of(t: TranslationSurface, traj) -> int:
    pos = traj.terminal_point
    for i, v in enumerate(t.polygons[traj.terminal_poly]):
        if (v - pos).is_zero():
            return i
    raise SurfaceError("terminal point is not a vertex")  # pragma: no cover


def connection_directions(s: TranslationSurface, length_bound) -> list[Vec2]:
    """Distinct unoriented directions of saddle connections up to the bound."""
    from .cylinders import direction_key

    dirs: dict[tuple, Vec2] = {}
    for sc in saddle_connections(s, length_bound):
        k = direction_key(sc.holonomy)
        if k not in dirs:
            dirs[k] = sc.holonomy
    return list(dirs.values())
