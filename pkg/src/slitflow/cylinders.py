"""Cylinder decompositions of periodic directions, exactly.

Every separatrix of the direction is traced from every node class; if all of
them close up on cone points within budget, the surface is cut along the
traced saddle connections and the complement reassembled into flat annuli.

Cylinder metrics are stored in the similarity frame sending the direction to
(1, 0): per cylinder the exported pair (w, h) satisfies w * h = true area of
the cylinder and h-ratios equal true height ratios, so every identity the
rest of the pipeline relies on (sum w_i h_i = area, vertical holonomy =
sum a_i h_i, moduli quotients) holds exactly in one frame.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .arrangement import Chord, Face, subdivide_polygon
from .field import Mat2, QuadExt, Vec2, unit_horizontal_frame
from . import geom
from .surface import Corner, EdgeRef, SurfaceError, TranslationSurface
from .tracing import BudgetExceeded, Terminal, TraceSegment, trace


@dataclass(frozen=True)
class NotPeriodic:
    """Semi-decision: no decomposition found within the trace budget."""

    direction: Vec2
    budget_length2: Optional[QuadExt]  # None: the step budget ran out
    reason: str = "separatrix exceeded budget without hitting a cone point"


@dataclass
class SpineConnection:
    """One saddle connection of the decomposition's direction."""

    index: int
    holonomy: Vec2
    chords: list[tuple[int, Vec2, Vec2]]
    cut_edges: list[EdgeRef]  # forward representatives (positively parallel)
    start_corner: Corner
    segments: list[TraceSegment] = field(default_factory=list)
    left_cylinder: int = -1
    right_cylinder: int = -1

    def length_param(self, direction: Vec2) -> QuadExt:
        return direction.dot(self.holonomy) / direction.norm2()

    def point_at_param(self, direction: Vec2, t: QuadExt) -> tuple[int, Vec2]:
        """(polygon, position) of the point at affine parameter t along the
        connection (0 <= t <= total length parameter)."""
        n2 = direction.norm2()
        acc = t - t  # zero of the right field
        for seg in self.segments:
            span = direction.dot(seg.end - seg.start) / n2
            if ((acc + span) - t).sign() >= 0:
                return seg.poly, seg.start + direction * (t - acc)
            acc = acc + span
        raise ValueError("parameter beyond the connection length")


@dataclass
class CylFace:
    poly: int
    face: Face
    x_off: QuadExt  # frame offset of this face's chart in the cylinder
    y_off: QuadExt

    def y_interval(self, frame: Mat2) -> tuple[QuadExt, QuadExt]:
        ys = [(frame * v).y + self.y_off for v in self.face.vertices]
        lo = hi = ys[0]
        for y in ys[1:]:
            if (y - lo).sign() < 0:
                lo = y
            if (y - hi).sign() > 0:
                hi = y
        return lo, hi


@dataclass
class Cylinder:
    index: int
    faces: list[CylFace]
    height: QuadExt  # frame height
    width: QuadExt  # scaled so width * height = true area
    area: QuadExt  # true area
    circumference_frame: QuadExt
    core_holonomy: Vec2  # surface-coordinate holonomy of the core curve
    self_gluing: bool = False
    boundary_connections: list[int] = field(default_factory=list)

    @property
    def modulus(self) -> QuadExt:
        """True (frame-invariant) modulus circumference / height."""
        return self.circumference_frame / self.height


@dataclass
class CylinderDecomposition:
    surface: TranslationSurface
    direction: Vec2
    frame: Mat2  # unit_horizontal_frame(direction)
    frame_det: QuadExt
    cylinders: list[Cylinder]
    connections: list[SpineConnection]
    chords_by_poly: dict[int, list[tuple[Vec2, Vec2, tuple]]]
    cut_edge_pairs: set[EdgeRef]
    _face_lookup: dict = field(default_factory=dict, repr=False)

    def total_cylinder_area(self) -> QuadExt:
        total = self.surface.zero()
        for c in self.cylinders:
            total = total + c.area
        return total

    def frame_point(self, pos: Vec2) -> Vec2:
        return self.frame * pos

    # -- point and segment location ---------------------------------------

    def locate_face(self, poly: int, pos: Vec2) -> Optional[tuple[int, int]]:
        """(cylinder index, face position in it) for a point strictly inside
        some face; None when the point lies on the spine or a face boundary."""
        for ci, cyl in enumerate(self.cylinders):
            for fi, cf in enumerate(cyl.faces):
                if cf.poly != poly:
                    continue
                if geom.point_in_polygon(cf.face.vertices, pos) > 0:
                    return (ci, fi)
        return None

    def locate_point(self, poly: int, pos: Vec2):
        """(cylinder index, transverse coordinate) for an interior point.

        Raises SpineBoundaryError when the point lies on the spine.
        """
        hit = self.locate_face(poly, pos)
        if hit is None:
            # Point on a face boundary: interior gluing seams are fine (the
            # transverse coordinate is still well defined); spine contact is
            # not.  Distinguish by checking spine membership.
            if self._on_spine(poly, pos):
                raise SpineBoundaryError(f"point {pos} lies on the spine")
            for ci, cyl in enumerate(self.cylinders):
                for cf in cyl.faces:
                    if cf.poly != poly:
                        continue
                    if geom.point_in_polygon(cf.face.vertices, pos) == 0:
                        y = (self.frame * pos).y + cf.y_off
                        return (ci, y)
            raise SurfaceError(f"point {pos} not located in any face")
        ci, fi = hit
        cf = self.cylinders[ci].faces[fi]
        y = (self.frame * pos).y + cf.y_off
        return (ci, y)

    def _on_spine(self, poly: int, pos: Vec2) -> bool:
        for a, b, _tag in self.chords_by_poly.get(poly, ()):
            if geom.on_segment(a, b, pos):
                return True
        for (p, e) in self.cut_edge_pairs:
            for (pp, ee) in ((p, e), self.surface.partner(p, e)):
                if pp != poly:
                    continue
                a, b = self.surface.edge_endpoints(pp, ee)
                if geom.on_segment(a, b, pos):
                    return True
        # Cone points are spine endpoints.
        kind, idx = self.surface.locate_in_polygon(poly, pos)
        if kind == "vertex":
            cls = self.surface.vertex_class_of((poly, idx))
            if self.surface.is_node_class(cls):
                return True
        return False


class SpineBoundaryError(ValueError):
    pass


def direction_key(v: Vec2) -> tuple:
    """Canonical key identifying the unoriented direction of v."""
    sy = v.y.sign()
    if sy < 0 or (sy == 0 and v.x.sign() < 0):
        v = -v
    if v.x.is_zero():
        return ("vertical",)
    slope = v.y / v.x
    return ("slope", slope.a, slope.b, v.x.sign())


def canonical_direction(v: Vec2) -> Vec2:
    sy = v.y.sign()
    if sy < 0 or (sy == 0 and v.x.sign() < 0):
        return -v
    return v


def _separatrix_germs(s: TranslationSurface, u: Vec2):
    """Outgoing germs in direction +u from every node class.

    Yields ("chord", corner) and ("edge", corner) germs; every saddle
    connection of direction +-u is traced exactly once over all germs.
    """
    for cls in s.node_classes():
        for c in cls.corners:
            a, b = s.corner_sector(c)
            if geom.same_direction(u, a):
                yield ("edge", c)
            elif geom.ccw_arc_contains(a, b, u) and not geom.same_direction(u, b):
                yield ("chord", c)


def default_budget_length2(s: TranslationSurface, scale: int = 1000) -> QuadExt:
    """(scale * diameter)^2 with a coarse exact diameter bound."""
    diam2 = s.zero()
    pts = [v for poly in s.polygons for v in poly]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            d2 = (pts[i] - pts[j]).norm2()
            if (d2 - diam2).sign() > 0:
                diam2 = d2
    return diam2 * (scale * scale)


def decompose(
    s: TranslationSurface,
    direction: Vec2,
    budget_length2: Optional[QuadExt] = None,
    max_steps: int = 200_000,
    unbounded: bool = False,
) -> Union[CylinderDecomposition, NotPeriodic]:
    """Cylinder decomposition in a periodic direction, or NotPeriodic.

    ``unbounded=True`` drops the length budget (the step budget remains);
    used when the direction is known periodic but its saddle connections are
    Euclidean-long while combinatorially short.
    """
    if direction.is_zero():
        raise ValueError("direction must be nonzero")
    u = canonical_direction(direction)
    key = ("decompose", direction_key(u))
    if budget_length2 is None and not unbounded:
        budget_length2 = default_budget_length2(s)
    cached = s._cache.get(key)
    if cached is not None:
        if isinstance(cached, CylinderDecomposition):
            return cached
        if cached.budget_length2 is None:
            return cached  # a step-budget failure does not improve
        if budget_length2 is not None and (
            cached.budget_length2 - budget_length2
        ).sign() >= 0:
            return cached

    traces = []
    for kind, corner in _separatrix_germs(s, u):
        try:
            traj = trace(
                s, ("corner", corner), u,
                max_length2=budget_length2, max_steps=max_steps,
            )
        except BudgetExceeded:
            result = NotPeriodic(u, None, "trace step budget exhausted")
            s._cache[key] = result
            return result
        if not traj.hit_node():
            result = NotPeriodic(u, budget_length2)
            s._cache[key] = result
            return result
        traces.append((corner, traj))

    result = _assemble(s, u, traces)
    s._cache[key] = result
    return result


def _assemble(
    s: TranslationSurface, u: Vec2, traces
) -> CylinderDecomposition:
    frame = unit_horizontal_frame(u)
    frame_det = frame.det

    connections: list[SpineConnection] = []
    chords_by_poly: dict[int, list[tuple[Vec2, Vec2, tuple]]] = {}
    cut_edge_pairs: set[EdgeRef] = set()

    for idx, (corner, traj) in enumerate(traces):
        chords = []
        cut_edges = []
        for si, seg in enumerate(traj.segments):
            if seg.kind == "chord":
                tag = ("sc", idx, si)
                chords.append((seg.poly, seg.start, seg.end))
                chords_by_poly.setdefault(seg.poly, []).append(
                    (seg.start, seg.end, tag)
                )
            else:
                e = (seg.poly, seg.edge)
                ev = s.edge_vector(*e)
                fwd = e if u.dot(ev).sign() > 0 else s.partner(*e)
                cut_edges.append(fwd)
                cut_edge_pairs.add(fwd)
        connections.append(
            SpineConnection(
                idx, traj.holonomy, chords, cut_edges, corner, list(traj.segments)
            )
        )

    # Cut every polygon.
    faces_by_poly: dict[int, list[Face]] = {}
    for p in range(len(s.polygons)):
        chords = [
            Chord(a, b, tag) for a, b, tag in chords_by_poly.get(p, [])
        ]
        faces_by_poly[p] = subdivide_polygon(s.polygons[p], chords)

    # Face adjacency across non-cut gluings.
    # Index boundary sub-edges: (poly, edge, endpoint key pair) -> (face ref, reversed?)
    sub_edges: dict[tuple, tuple[int, int, int]] = {}
    for p, faces in faces_by_poly.items():
        for fi, f in enumerate(faces):
            for ti, tag in enumerate(f.tags):
                if tag[0] != "boundary":
                    continue
                a, b = f.edge_endpoints(ti)
                sub_edges[(p, tag[1], frozenset((a.key(), b.key())))] = (p, fi, ti)

    cut_directed = set()
    for e in cut_edge_pairs:
        cut_directed.add(e)
        cut_directed.add(s.partner(*e))

    adjacency: dict[tuple[int, int], list[tuple[tuple[int, int], Vec2]]] = {}

    def add_adj(f1, f2, t):
        adjacency.setdefault(f1, []).append((f2, t))

    matched = set()
    for (p, e, kk), (pp, fi, ti) in sub_edges.items():
        if (p, e) in cut_directed:
            continue
        if (pp, fi, ti) in matched:
            continue
        q, f = s.partner(p, e)
        t = s.gluing_translation(p, e)
        fobj = faces_by_poly[pp][fi]
        a, b = fobj.edge_endpoints(ti)
        kk2 = frozenset(((a + t).key(), (b + t).key()))
        other = sub_edges.get((q, f, kk2))
        if other is None:
            raise SurfaceError(
                f"subdivided edge ({p},{e}) has no partner interval"
            )  # pragma: no cover
        matched.add((pp, fi, ti))
        matched.add(other)
        add_adj((pp, fi), (other[0], other[1]), t)
        add_adj((other[0], other[1]), (pp, fi), -t)

    # Union-find into components.
    face_ids = [(p, fi) for p, faces in faces_by_poly.items() for fi in range(len(faces))]
    parent = {f: f for f in face_ids}

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for f1, neighbors in adjacency.items():
        for f2, _ in neighbors:
            r1, r2 = find(f1), find(f2)
            if r1 != r2:
                parent[r1] = r2

    comp_faces: dict[tuple, list[tuple[int, int]]] = {}
    for f in face_ids:
        comp_faces.setdefault(find(f), []).append(f)

    cylinders: list[Cylinder] = []
    face_placement: dict[tuple[int, int], tuple[int, QuadExt, QuadExt]] = {}

    for comp_root, members in sorted(comp_faces.items()):
        ci = len(cylinders)
        seed = min(members)
        offsets: dict[tuple[int, int], tuple[QuadExt, QuadExt]] = {
            seed: (s.zero(), s.zero())
        }
        stack = [seed]
        while stack:
            cur = stack.pop()
            ox, oy = offsets[cur]
            for nxt, t in adjacency.get(cur, ()):
                # Crossing the gluing sends chart points pos -> pos + t, so
                # the neighbor's chart offset shifts by -frame(t) to keep the
                # cylinder coordinate continuous.
                ft = frame * t
                nox, noy = ox - ft.x, oy - ft.y
                if nxt in offsets:
                    _, ey = offsets[nxt]
                    if (ey - noy).sign() != 0:
                        raise SurfaceError(
                            "component is not a flat annulus (transverse offset clash)"
                        )  # pragma: no cover
                else:
                    offsets[nxt] = (nox, noy)
                    stack.append(nxt)

        # Transverse extent.
        y_lo = y_hi = None
        area_true = s.zero()
        for m in members:
            p, fi = m
            fobj = faces_by_poly[p][fi]
            _, oy = offsets[m]
            for v in fobj.vertices:
                y = (frame * v).y + oy
                if y_lo is None or (y - y_lo).sign() < 0:
                    y_lo = y
                if y_hi is None or (y - y_hi).sign() > 0:
                    y_hi = y
            area_true = area_true + fobj.area()
        height = y_hi - y_lo
        if height.sign() <= 0:
            raise SurfaceError("cylinder with nonpositive height")  # pragma: no cover
        area_frame = area_true / (u.norm2())
        circ_frame = area_frame / height
        width = area_true / height
        core = u * circ_frame

        cyl_faces = []
        for m in sorted(members):
            p, fi = m
            ox, oy = offsets[m]
            cyl_faces.append(CylFace(p, faces_by_poly[p][fi], ox, oy - y_lo))
            face_placement[m] = (ci, ox, oy - y_lo)
        cylinders.append(
            Cylinder(
                index=ci,
                faces=cyl_faces,
                height=height,
                width=width,
                area=area_true,
                circumference_frame=circ_frame,
                core_holonomy=core,
            )
        )

    dec = CylinderDecomposition(
        surface=s,
        direction=u,
        frame=frame,
        frame_det=frame_det,
        cylinders=cylinders,
        connections=connections,
        chords_by_poly=chords_by_poly,
        cut_edge_pairs=cut_edge_pairs,
    )

    _attach_boundary_data(s, dec, faces_by_poly, face_placement)
    _validate_decomposition(s, dec)
    return dec


def _attach_boundary_data(s, dec, faces_by_poly, face_placement):
    """Fill left/right cylinder per saddle connection and self-gluing flags."""
    # Chord sides: faces adjacent to each chord tag, by side label.
    side_map: dict[int, dict[int, set[int]]] = {}
    for p, faces in faces_by_poly.items():
        for fi, f in enumerate(faces):
            for tag in f.tags:
                if tag[0] == "chord":
                    _, cid, sgn = tag
                    sc_idx = cid[1]
                    ci = face_placement[(p, fi)][0]
                    side_map.setdefault(sc_idx, {1: set(), -1: set()})[sgn].add(ci)

    # Cut edges: forward edge's polygon face is on the left (+1), partner right.
    bnd_faces: dict[tuple, dict[int, int]] = {}
    for p, faces in faces_by_poly.items():
        for fi, f in enumerate(faces):
            for ti, tag in enumerate(f.tags):
                if tag[0] == "boundary":
                    a, b = f.edge_endpoints(ti)
                    bnd_faces[(p, tag[1], frozenset((a.key(), b.key())))] = (p, fi)

    for sc in dec.connections:
        sides: dict[int, set[int]] = {1: set(), -1: set()}
        m = side_map.get(sc.index)
        if m:
            for sgn, cis in m.items():
                sides[sgn] |= cis
        for (p, e) in sc.cut_edges:
            a, b = s.edge_endpoints(p, e)
            hit = bnd_faces.get((p, e, frozenset((a.key(), b.key()))))
            if hit is not None:
                sides[1].add(face_placement[hit][0])
            q, f = s.partner(p, e)
            a2, b2 = s.edge_endpoints(q, f)
            hit2 = bnd_faces.get((q, f, frozenset((a2.key(), b2.key()))))
            if hit2 is not None:
                sides[-1].add(face_placement[hit2][0])
        left = sides[1]
        right = sides[-1]
        if len(left) != 1 or len(right) != 1:
            raise SurfaceError(
                f"saddle connection {sc.index} borders {left} / {right}"
            )  # pragma: no cover
        sc.left_cylinder = left.pop()
        sc.right_cylinder = right.pop()
        for ci in {sc.left_cylinder, sc.right_cylinder}:
            dec.cylinders[ci].boundary_connections.append(sc.index)
        if sc.left_cylinder == sc.right_cylinder:
            dec.cylinders[sc.left_cylinder].self_gluing = True


def _validate_decomposition(s: TranslationSurface, dec: CylinderDecomposition):
    total = dec.total_cylinder_area()
    if total != s.area:
        raise SurfaceError(
            f"cylinder areas {float(total)} do not sum to surface area {float(s.area)}"
        )  # pragma: no cover
    for c in dec.cylinders:
        if c.width * c.height != c.area:
            raise SurfaceError("w*h != area")  # pragma: no cover


# -- crossing profiles ------------------------------------------------------


@dataclass(frozen=True)
class CrossingProfile:
    k: int
    counts: dict[int, int]
    ell: int
    kappa: QuadExt
    heights: dict[int, QuadExt]
    transverse_holonomy: QuadExt


def _segment_subchords(dec: CylinderDecomposition, poly: int, a: Vec2, b: Vec2):
    """Split the chord [a, b] of ``poly`` at its spine crossings."""
    ab = b - a
    n2 = ab.norm2()
    zero = dec.surface.zero()
    one = dec.surface.one()
    cuts = [(zero, a), (one, b)]
    for ca, cb, _tag in dec.chords_by_poly.get(poly, ()):
        hit = geom.segment_intersection_param(a, ab, ca, cb)
        if hit is None:
            continue
        t, sp = hit
        if t.sign() <= 0 or (t - one).sign() >= 0:
            continue
        if sp.sign() < 0 or (sp - one).sign() > 0:
            continue
        cuts.append((t, a + ab * t))
    from functools import cmp_to_key

    cuts.sort(key=cmp_to_key(lambda p1, p2: (p1[0] - p2[0]).sign()))
    out = []
    for (t0, p0), (t1, p1) in zip(cuts, cuts[1:]):
        if (t1 - t0).sign() > 0:
            out.append((p0, p1))
    return out


def _midpoint(p0: Vec2, p1: Vec2) -> Vec2:
    return Vec2((p0.x + p1.x) / 2, (p0.y + p1.y) / 2)


def _edge_segment_pieces(dec: CylinderDecomposition, seg: TraceSegment):
    """Split travel along a (non-spine) polygon edge at spine contact points."""
    s = dec.surface
    p, e = seg.poly, seg.edge
    if (p, e) in dec.cut_edge_pairs or s.partner(p, e) in dec.cut_edge_pairs:
        raise ValueError("segment travels along a spine edge")
    pts = [seg.start, seg.end]
    for a, b, _tag in dec.chords_by_poly.get(p, ()):
        for cand in (a, b):
            if geom.on_segment(seg.start, seg.end, cand):
                pts.append(cand)
    q, f = s.partner(p, e)
    t_back = s.gluing_translation(q, f)
    for a, b, _tag in dec.chords_by_poly.get(q, ()):
        for cand in (a, b):
            this_side = cand + t_back
            if geom.on_segment(seg.start, seg.end, this_side):
                pts.append(this_side)
    ev = seg.end - seg.start
    n2 = ev.norm2()
    from functools import cmp_to_key

    params = {}
    for pt in pts:
        t = ev.dot(pt - seg.start) / n2
        params[pt.key()] = (t, pt)
    ordered = sorted(params.values(), key=cmp_to_key(lambda u, v: (u[0] - v[0]).sign()))
    return [
        (p0, p1)
        for (t0, p0), (t1, p1) in zip(ordered, ordered[1:])
        if (t1 - t0).sign() > 0
    ]


def _cylinder_of_boundary_point(dec: CylinderDecomposition, poly: int, pos: Vec2) -> int:
    for ci, cyl in enumerate(dec.cylinders):
        for cf in cyl.faces:
            if cf.poly != poly:
                continue
            if geom.point_in_polygon(cf.face.vertices, pos) >= 0:
                return ci
    raise SurfaceError(f"point {pos} not on any face of polygon {poly}")


def segment_cylinder_extents(
    dec: CylinderDecomposition, segments: Sequence[TraceSegment]
) -> dict[int, QuadExt]:
    """Total transverse (frame-y) extent of the segment chain per cylinder.

    Chord segments are split at spine crossings and located by strict
    interior membership; edge-travel segments (the chain running along a
    non-spine polygon edge) contribute through either adjacent face, which
    lie in the same cylinder.
    """
    extents: dict[int, QuadExt] = {}
    frame = dec.frame
    zero = dec.surface.zero()

    def add(ci: int, p0: Vec2, p1: Vec2):
        dy = (frame * p1).y - (frame * p0).y
        dy = dy if dy.sign() >= 0 else -dy
        extents[ci] = extents.get(ci, zero) + dy

    for seg in segments:
        if seg.kind == "chord":
            for p0, p1 in _segment_subchords(dec, seg.poly, seg.start, seg.end):
                mid = _midpoint(p0, p1)
                hit = dec.locate_face(seg.poly, mid)
                if hit is None:
                    raise SurfaceError(
                        f"sub-chord midpoint {mid} not strictly inside a face"
                    )  # pragma: no cover
                add(hit[0], p0, p1)
        else:
            for p0, p1 in _edge_segment_pieces(dec, seg):
                ci = _cylinder_of_boundary_point(dec, seg.poly, _midpoint(p0, p1))
                add(ci, p0, p1)
    return extents


def crossing_profile(
    dec: CylinderDecomposition, segments: Sequence[TraceSegment], holonomy: Vec2
) -> CrossingProfile:
    """Exact crossing counts of a saddle connection against a decomposition."""
    if dec.direction.cross(holonomy).is_zero():
        raise ValueError("saddle connection is parallel to the decomposition")
    extents = segment_cylinder_extents(dec, segments)
    counts: dict[int, int] = {}
    heights: dict[int, QuadExt] = {}
    for ci, ext in extents.items():
        h = dec.cylinders[ci].height
        q = ext / h
        if not q.is_rational() or q.as_rational().denominator != 1:
            raise SurfaceError(
                f"non-integral crossing count {q} for cylinder {ci}"
            )  # pragma: no cover
        n = int(q.as_rational())
        if n > 0:
            counts[ci] = n
            heights[ci] = h
    if not counts:
        raise ValueError("saddle connection crosses no cylinder")
    hs = list(heights.values())
    hmax, hmin = hs[0], hs[0]
    for h in hs[1:]:
        if (h - hmax).sign() > 0:
            hmax = h
        if (h - hmin).sign() < 0:
            hmin = h
    kappa = hmax / hmin
    y = (dec.frame * holonomy).y
    y = y if y.sign() >= 0 else -y
    total = dec.surface.zero()
    for ci, n in counts.items():
        total = total + heights[ci] * n
    if total != y:
        raise SurfaceError(
            "crossing identity sum a_i h_i = |transverse holonomy| failed"
        )  # pragma: no cover
    return CrossingProfile(
        k=len(counts),
        counts=counts,
        ell=max(counts.values()),
        kappa=kappa,
        heights=heights,
        transverse_holonomy=y,
    )
