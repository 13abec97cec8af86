"""Translation surfaces as polygons with translation gluings.

A surface is a list of simple CCW polygons with vertices in Q(sqrt(d))^2,
a perfect matching on directed edges (glued pairs carry opposite edge
vectors), interior marked points, and optionally marked vertex classes.
Everything is immutable after construction; derived combinatorics are cached.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .field import (
    FieldError,
    Mat2,
    MixedFieldError,
    QuadExt,
    Vec2,
    check_field_constant,
)
from . import geom

Corner = tuple[int, int]
EdgeRef = tuple[int, int]


class SurfaceError(ValueError):
    """Structural defect in a surface description."""


@dataclass(frozen=True)
class StratumSignature:
    zero_orders: tuple[int, ...]
    genus: int

    def __str__(self):
        if not self.zero_orders:
            return f"torus (genus {self.genus})"
        inner = ",".join(str(k) for k in self.zero_orders)
        return f"H({inner}) genus {self.genus}"


@dataclass(frozen=True)
class VertexClass:
    index: int
    corners: tuple[Corner, ...]
    angle_turns: int  # total cone angle = 2*pi*angle_turns
    labels: tuple[str, ...]

    @property
    def is_cone(self) -> bool:
        return self.angle_turns >= 2

    @property
    def order(self) -> int:
        return self.angle_turns - 1


class TranslationSurface:
    def __init__(
        self,
        d: int,
        polygons: Sequence[Sequence[Vec2]],
        gluings: Iterable[tuple[EdgeRef, EdgeRef]],
        marked_points: Optional[Mapping[str, tuple[int, Vec2]]] = None,
        marked_vertices: Optional[Mapping[str, Corner]] = None,
    ):
        self.d = check_field_constant(d)
        self.polygons: tuple[tuple[Vec2, ...], ...] = tuple(
            tuple(v for v in poly) for poly in polygons
        )
        if not self.polygons:
            raise SurfaceError("surface needs at least one polygon")
        for poly in self.polygons:
            for v in poly:
                if v.d != self.d:
                    raise MixedFieldError("polygon vertex over a different field")

        glue: dict[EdgeRef, EdgeRef] = {}
        for e, f in gluings:
            e, f = tuple(e), tuple(f)
            if e == f:
                raise SurfaceError(f"edge {e} glued to itself")
            for g in (e, f):
                if g in glue:
                    raise SurfaceError(f"edge {g} glued twice")
            glue[e] = f
            glue[f] = e
        self.gluings: dict[EdgeRef, EdgeRef] = glue

        expected = {
            (p, i) for p, poly in enumerate(self.polygons) for i in range(len(poly))
        }
        if set(glue) != expected:
            missing = expected - set(glue)
            extra = set(glue) - expected
            raise SurfaceError(f"gluing mismatch: missing={missing} extra={extra}")

        for e, f in glue.items():
            ve, vf = self.edge_vector(*e), self.edge_vector(*f)
            if not (ve + vf).is_zero():
                raise SurfaceError(f"glued edges {e}, {f} are not opposite translates")

        self.marked_points: dict[str, tuple[int, Vec2]] = dict(marked_points or {})
        for label, (p, pos) in self.marked_points.items():
            if pos.d != self.d:
                raise MixedFieldError(f"marked point {label} over a different field")
            if not (0 <= p < len(self.polygons)):
                raise SurfaceError(f"marked point {label} on missing polygon {p}")
        self.marked_vertices: dict[str, Corner] = dict(marked_vertices or {})

        self._classes: Optional[tuple[VertexClass, ...]] = None
        self._corner_class: Optional[dict[Corner, int]] = None
        self._cache: dict = {}

    # -- basic accessors -------------------------------------------------

    def edge_endpoints(self, p: int, e: int) -> tuple[Vec2, Vec2]:
        poly = self.polygons[p]
        return poly[e], poly[(e + 1) % len(poly)]

    def edge_vector(self, p: int, e: int) -> Vec2:
        a, b = self.edge_endpoints(p, e)
        return b - a

    def partner(self, p: int, e: int) -> EdgeRef:
        return self.gluings[(p, e)]

    def gluing_translation(self, p: int, e: int) -> Vec2:
        """Translation carrying points of edge (p, e) onto its partner."""
        q, f = self.gluings[(p, e)]
        a, _ = self.edge_endpoints(p, e)
        _, dd = self.edge_endpoints(q, f)
        return dd - a

    def n_edges(self, p: int) -> int:
        return len(self.polygons[p])

    @property
    def area(self) -> QuadExt:
        if "area" not in self._cache:
            total = QuadExt(0, 0, self.d)
            for poly in self.polygons:
                total = total + geom.polygon_area(poly)
            self._cache["area"] = total
        return self._cache["area"]

    def zero(self) -> QuadExt:
        return QuadExt(0, 0, self.d)

    def one(self) -> QuadExt:
        return QuadExt(1, 0, self.d)

    # -- vertex classes ----------------------------------------------------

    def corner_sector(self, corner: Corner) -> tuple[Vec2, Vec2]:
        """Directions (A, B): outgoing edge, reversed incoming edge.

        The interior angle at the corner is the CCW arc from A to B.
        """
        p, i = corner
        n = len(self.polygons[p])
        return self.edge_vector(p, i), -self.edge_vector(p, (i - 1) % n)

    def next_corner_ccw(self, corner: Corner) -> Corner:
        p, i = corner
        n = len(self.polygons[p])
        q, j = self.gluings[(p, (i - 1) % n)]
        return (q, j)

    def _build_classes(self) -> None:
        seen: set[Corner] = set()
        classes: list[VertexClass] = []
        corner_class: dict[Corner, int] = {}
        labels_by_corner: dict[Corner, list[str]] = {}
        for label, corner in self.marked_vertices.items():
            labels_by_corner.setdefault(tuple(corner), []).append(label)

        for p, poly in enumerate(self.polygons):
            for i in range(len(poly)):
                start = (p, i)
                if start in seen:
                    continue
                cycle = [start]
                seen.add(start)
                cur = self.next_corner_ccw(start)
                while cur != start:
                    if cur in seen:
                        raise SurfaceError("corner walk did not close into a cycle")
                    cycle.append(cur)
                    seen.add(cur)
                    cur = self.next_corner_ccw(cur)
                turns = self._winding(cycle)
                labels = []
                for c in cycle:
                    labels.extend(labels_by_corner.get(c, []))
                idx = len(classes)
                classes.append(
                    VertexClass(idx, tuple(cycle), turns, tuple(sorted(labels)))
                )
                for c in cycle:
                    corner_class[c] = idx
        self._classes = tuple(classes)
        self._corner_class = corner_class

    def _winding(self, cycle: Sequence[Corner]) -> int:
        """Number of full turns around a vertex class, exactly.

        The corner sectors chain head-to-tail (the reversed incoming edge of
        one corner is the outgoing edge of the next), so the total angle is a
        multiple of 2*pi; count crossings of the starting direction over the
        half-open sector arcs.
        """
        ref = self.corner_sector(cycle[0])[0]
        turns = 0
        for corner in cycle:
            a, b = self.corner_sector(corner)
            if geom.ccw_arc_contains(a, b, ref):
                turns += 1
        if turns < 1:
            raise SurfaceError("vertex class with non-positive cone angle")
        return turns

    @property
    def vertex_classes(self) -> tuple[VertexClass, ...]:
        if self._classes is None:
            self._build_classes()
        return self._classes

    def corner_class_index(self, corner: Corner) -> int:
        if self._corner_class is None:
            self._build_classes()
        return self._corner_class[corner]

    def vertex_class_of(self, corner: Corner) -> VertexClass:
        return self.vertex_classes[self.corner_class_index(corner)]

    def is_node_class(self, cls: VertexClass) -> bool:
        """Node classes terminate trajectories: cone points and marked vertices."""
        return cls.is_cone or bool(cls.labels)

    def cone_classes(self) -> list[VertexClass]:
        return [c for c in self.vertex_classes if c.is_cone]

    def node_classes(self) -> list[VertexClass]:
        return [c for c in self.vertex_classes if self.is_node_class(c)]

    # -- geometry ------------------------------------------------------------

    def vertex_position(self, corner: Corner) -> Vec2:
        p, i = corner
        return self.polygons[p][i]

    def transform(self, m: Mat2) -> "TranslationSurface":
        if m.det.sign() <= 0:
            raise ValueError("surface transform requires det > 0")
        polys = [[m * v for v in poly] for poly in self.polygons]
        marked = {k: (p, m * pos) for k, (p, pos) in self.marked_points.items()}
        pairs = self._gluing_pairs()
        return TranslationSurface(self.d, polys, pairs, marked, self.marked_vertices)

    def _gluing_pairs(self) -> list[tuple[EdgeRef, EdgeRef]]:
        pairs = []
        done = set()
        for e, f in self.gluings.items():
            if e in done or f in done:
                continue
            pairs.append((e, f))
            done.add(e)
            done.add(f)
        return pairs

    # -- canonical points ------------------------------------------------

    def locate_in_polygon(self, p: int, pos: Vec2):
        """('vertex', i) | ('edge', e) | ('interior', None) | ('outside', None)."""
        poly = self.polygons[p]
        for i, v in enumerate(poly):
            if (pos - v).is_zero():
                return ("vertex", i)
        side = geom.point_in_polygon(poly, pos)
        if side == 0:
            for e in range(len(poly)):
                a, b = self.edge_endpoints(p, e)
                if geom.on_segment(a, b, pos):
                    return ("edge", e)
            raise SurfaceError("boundary point not on any edge")  # pragma: no cover
        return ("interior", None) if side > 0 else ("outside", None)

    def canonical_point_key(self, p: int, pos: Vec2) -> tuple:
        """Hashable key equal for equal surface points across representations."""
        kind, idx = self.locate_in_polygon(p, pos)
        if kind == "outside":
            raise SurfaceError(f"point {pos} not on polygon {p}")
        if kind == "vertex":
            return ("v", self.corner_class_index((p, idx)))
        if kind == "edge":
            q, f = self.gluings[(p, idx)]
            other = pos + self.gluing_translation(p, idx)
            a = (p, idx, pos.key())
            b = (q, f, other.key())
            return ("e",) + min(a, b)
        return ("i", p, pos.key())

    def same_point(self, p1: int, pos1: Vec2, p2: int, pos2: Vec2) -> bool:
        return self.canonical_point_key(p1, pos1) == self.canonical_point_key(p2, pos2)

    def marked_point(self, label: str) -> tuple[int, Vec2]:
        return self.marked_points[label]

    # -- serialization -----------------------------------------------------

    def to_json_obj(self) -> dict:
        return {
            "d": self.d,
            "polygons": [
                [[str(v.x.a), str(v.x.b), str(v.y.a), str(v.y.b)] for v in poly]
                for poly in self.polygons
            ],
            "gluings": [[*e, *f] for e, f in sorted(self._gluing_pairs())],
            "marked": [
                {
                    "poly": p,
                    "coords": [str(pos.x.a), str(pos.x.b), str(pos.y.a), str(pos.y.b)],
                    "label": label,
                }
                for label, (p, pos) in sorted(self.marked_points.items())
            ],
            "marked_vertices": [
                {"poly": c[0], "vertex": c[1], "label": label}
                for label, c in sorted(self.marked_vertices.items())
            ],
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "TranslationSurface":
        d = obj["d"]

        def vec(parts) -> Vec2:
            xa, xb, ya, yb = (Fraction(s) for s in parts)
            return Vec2(QuadExt(xa, xb, d), QuadExt(ya, yb, d))

        polygons = [[vec(v) for v in poly] for poly in obj["polygons"]]
        gluings = [((g[0], g[1]), (g[2], g[3])) for g in obj["gluings"]]
        marked = {
            m["label"]: (m["poly"], vec(m["coords"])) for m in obj.get("marked", [])
        }
        marked_vertices = {
            m["label"]: (m["poly"], m["vertex"])
            for m in obj.get("marked_vertices", [])
        }
        return cls(d, polygons, gluings, marked, marked_vertices)

    def __repr__(self):
        return (
            f"TranslationSurface(d={self.d}, polygons={len(self.polygons)}, "
            f"edges={len(self.gluings) // 2})"
        )


def validate(s: TranslationSurface) -> StratumSignature:
    """Full exact validation; returns the stratum signature.

    Checks polygon simplicity and orientation, gluing consistency (already
    structural), vertex-class angles, connectivity, positive area, marked
    points strictly interior, and the Gauss-Bonnet count against the Euler
    characteristic.
    """
    for p, poly in enumerate(s.polygons):
        if not geom.is_simple_polygon(poly):
            raise SurfaceError(f"polygon {p} is not simple")
        if geom.signed_area2(poly).sign() <= 0:
            raise SurfaceError(f"polygon {p} is not counterclockwise")

    # Connectivity over the gluing graph.
    parent = list(range(len(s.polygons)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (p, _), (q, _) in s.gluings.items():
        rp, rq = find(p), find(q)
        if rp != rq:
            parent[rp] = rq
    if len({find(p) for p in range(len(s.polygons))}) != 1:
        raise SurfaceError("surface is not connected")

    if s.area.sign() <= 0:
        raise SurfaceError("surface area must be positive")

    for label, (p, pos) in s.marked_points.items():
        kind, _ = s.locate_in_polygon(p, pos)
        if kind != "interior":
            raise SurfaceError(
                f"marked point {label} must lie strictly inside its polygon"
            )

    classes = s.vertex_classes
    n_vertices = len(classes)
    n_edges = len(s.gluings) // 2
    n_faces = len(s.polygons)
    chi = n_vertices - n_edges + n_faces
    if chi % 2 != 0:
        raise SurfaceError(f"odd Euler characteristic {chi}")
    genus = (2 - chi) // 2
    orders = tuple(sorted((c.order for c in classes if c.is_cone), reverse=True))
    if sum(orders) != 2 * genus - 2:
        raise SurfaceError(
            f"cone angles {orders} inconsistent with genus {genus}"
        )
    return StratumSignature(orders, genus)
