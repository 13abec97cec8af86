"""Exact planar subdivision of a simple polygon by interior chord segments.

Chords may share endpoints, end in the interior (chains), or cross each
other transversally; their interiors must stay inside the polygon and no two
chords may overlap along a segment.  Faces are extracted from a half-edge
structure with exact angular sorting; every numeric decision is a field sign.

Used for cylinder cutting, slit double covers, and symmetric-difference
area computations.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key
from typing import Iterable, Optional, Sequence

from .field import QuadExt, Vec2
from . import geom


@dataclass(frozen=True)
class Chord:
    a: Vec2
    b: Vec2
    chord_id: object


# Edge tags on faces:
#   ("boundary", original_edge_index)
#   ("chord", chord_id, side)  with side +1 when the face lies to the left of
#   the chord's a->b direction, -1 to the right.
Tag = tuple


@dataclass
class Face:
    vertices: list[Vec2]
    tags: list[Tag]

    def area2(self) -> QuadExt:
        return geom.signed_area2(self.vertices)

    def area(self) -> QuadExt:
        two = self.area2()
        return QuadExt(two.a / 2, two.b / 2, two.d)

    def edge_endpoints(self, i: int) -> tuple[Vec2, Vec2]:
        return self.vertices[i], self.vertices[(i + 1) % len(self.vertices)]


def _key(p: Vec2):
    return p.key()


class _HalfEdge:
    __slots__ = ("src", "dst", "tag", "twin", "visited")

    def __init__(self, src: Vec2, dst: Vec2, tag: Tag):
        self.src = src
        self.dst = dst
        self.tag = tag
        self.twin: Optional["_HalfEdge"] = None
        self.visited = False


def _sort_exact(values: list[tuple[QuadExt, Vec2]]) -> list[tuple[QuadExt, Vec2]]:
    def cmp(u, v):
        return (u[0] - v[0]).sign()

    return sorted(values, key=cmp_to_key(cmp))


def _split_points_on_segment(a: Vec2, b: Vec2, candidates: Iterable[Vec2]) -> list[Vec2]:
    """Sorted interior+endpoint split points of [a, b] among candidates."""
    ab = b - a
    n2 = ab.norm2()
    pts: dict[tuple, tuple[QuadExt, Vec2]] = {}
    for p in candidates:
        if not geom.on_segment(a, b, p):
            continue
        t = ab.dot(p - a) / n2
        pts[_key(p)] = (t, p)
    return [p for _, p in _sort_exact(list(pts.values()))]


def subdivide_polygon(
    polygon: Sequence[Vec2],
    chords: Sequence[Chord],
    extra_boundary_points: Sequence[Vec2] = (),
) -> list[Face]:
    """Faces of the polygon cut along the chords, each CCW with edge tags.

    ``extra_boundary_points`` force additional subdivisions of boundary
    edges (used to mirror subdivisions induced on glued partner edges).
    """
    d = polygon[0].d
    n = len(polygon)

    # Deduplicate chords by unordered endpoint pair.
    seen = set()
    chord_list: list[Chord] = []
    for ch in chords:
        k = frozenset((_key(ch.a), _key(ch.b)))
        if k in seen:
            raise ValueError(f"duplicate chord {ch.chord_id}")
        seen.add(k)
        if (ch.b - ch.a).is_zero():
            raise ValueError(f"zero-length chord {ch.chord_id}")
        chord_list.append(ch)

    # Split points per chord: own endpoints, crossings with other chords,
    # endpoint touches, and (defensively) polygon vertices lying on it.
    chord_splits: list[list[tuple[QuadExt, Vec2]]] = []
    for i, ch in enumerate(chord_list):
        ab = ch.b - ch.a
        n2 = ab.norm2()
        pts: dict[tuple, tuple[QuadExt, Vec2]] = {}

        def add(p: Vec2):
            t = ab.dot(p - ch.a) / n2
            if t.sign() < 0 or (t - QuadExt(1, 0, d)).sign() > 0:
                return
            if not (ch.a + ab * t - p).is_zero():
                return  # not actually on the line
            pts[_key(p)] = (t, p)

        add(ch.a)
        add(ch.b)
        for j, other in enumerate(chord_list):
            if j == i:
                continue
            hit = geom.segment_intersection_param(ch.a, ab, other.a, other.b)
            if hit is not None:
                t, sp = hit
                one = QuadExt(1, 0, d)
                if (
                    t.sign() >= 0
                    and (t - one).sign() <= 0
                    and sp.sign() >= 0
                    and (sp - one).sign() <= 0
                ):
                    add(ch.a + ab * t)
            else:
                # Parallel: tolerate endpoint touches, reject overlaps.
                for p in (other.a, other.b):
                    if geom.on_segment(ch.a, ch.b, p):
                        if not (
                            (p - ch.a).is_zero()
                            or (p - ch.b).is_zero()
                            or (ch.a - other.a).is_zero()
                            or (ch.a - other.b).is_zero()
                            or (ch.b - other.a).is_zero()
                            or (ch.b - other.b).is_zero()
                        ):
                            raise ValueError(
                                f"chords {ch.chord_id} and {other.chord_id} overlap"
                            )
                        add(p)
        for v in polygon:
            add(v)
        chord_splits.append(_sort_exact(list(pts.values())))

    # Split points per boundary edge: polygon vertices + chord endpoints.
    all_chord_endpoints = [p for ch in chord_list for p in (ch.a, ch.b)]
    all_chord_endpoints.extend(extra_boundary_points)
    half_edges: list[_HalfEdge] = []

    def add_pair(a: Vec2, b: Vec2, tag_fwd: Tag, tag_rev: Tag):
        h1 = _HalfEdge(a, b, tag_fwd)
        h2 = _HalfEdge(b, a, tag_rev)
        h1.twin, h2.twin = h2, h1
        half_edges.append(h1)
        half_edges.append(h2)

    for e in range(n):
        a, b = polygon[e], polygon[(e + 1) % n]
        pts = _split_points_on_segment(a, b, [a, b] + all_chord_endpoints)
        for u, v in zip(pts, pts[1:]):
            add_pair(u, v, ("boundary", e), ("outside", e))

    for ch, splits in zip(chord_list, chord_splits):
        for (t0, p0), (t1, p1) in zip(splits, splits[1:]):
            if (p1 - p0).is_zero():
                continue
            add_pair(p0, p1, ("chord", ch.chord_id, 1), ("chord", ch.chord_id, -1))

    # Angular order of outgoing half-edges around every node.
    outgoing: dict[tuple, list[_HalfEdge]] = {}
    for h in half_edges:
        outgoing.setdefault(_key(h.src), []).append(h)

    def ang_cmp(h1: _HalfEdge, h2: _HalfEdge) -> int:
        c = geom.compare_directions(h1.dst - h1.src, h2.dst - h2.src)
        if c == 0 and h1 is not h2:
            raise ValueError("overlapping edges in arrangement")
        return c

    succ: dict[int, _HalfEdge] = {}
    for node, hs in outgoing.items():
        hs_sorted = sorted(hs, key=cmp_to_key(ang_cmp))
        outgoing[node] = hs_sorted

    def next_half_edge(h: _HalfEdge) -> _HalfEdge:
        # Face with interior on the left: from twin(h), step one edge
        # clockwise in the CCW-sorted outgoing list at h's head.
        hs = outgoing[_key(h.dst)]
        idx = hs.index(h.twin)
        return hs[(idx - 1) % len(hs)]

    faces: list[Face] = []
    for h in half_edges:
        if h.visited:
            continue
        cycle = []
        cur = h
        while not cur.visited:
            cur.visited = True
            cycle.append(cur)
            cur = next_half_edge(cur)
        if cur is not cycle[0]:  # pragma: no cover
            raise RuntimeError("face walk did not close")
        verts = [e.src for e in cycle]
        if geom.signed_area2(verts).sign() > 0:
            tags = [e.tag for e in cycle]
            if any(t[0] == "outside" for t in tags):  # pragma: no cover
                raise RuntimeError("outside tag on an interior face")
            faces.append(Face(verts, tags))

    # Exact conservation check: faces tile the polygon.
    total = QuadExt(0, 0, d)
    for f in faces:
        total = total + f.area2()
    if total != geom.signed_area2(polygon):
        raise RuntimeError("subdivision area mismatch")  # pragma: no cover
    return faces
