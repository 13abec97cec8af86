"""Canonical Delaunay cell decomposition and translation-surface isomorphism.

Membership of a matrix in the Veech group reduces to: transform the surface,
compute the Delaunay cell complex of both sides (flip algorithm with exact
incircle signs, cocircular triangles merged into convex cells), and search
for a combinatorial isomorphism matching edge vectors exactly.  The Delaunay
complex is intrinsic, so failure of the search is a genuine negative.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .field import QuadExt, Vec2
from . import geom
from .surface import SurfaceError, TranslationSurface
from .tracing import BudgetExceeded

Slot = tuple[int, int]  # (triangle index, edge index 0..2)


def _incircle(a: Vec2, b: Vec2, c: Vec2, p: Vec2) -> int:
    """Sign of the incircle determinant: +1 when p is strictly inside the
    circumcircle of the CCW triangle (a, b, c)."""
    ax, ay = a.x - p.x, a.y - p.y
    bx, by = b.x - p.x, b.y - p.y
    cx, cy = c.x - p.x, c.y - p.y
    a2 = ax * ax + ay * ay
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    det = (
        a2 * (bx * cy - by * cx)
        - b2 * (ax * cy - ay * cx)
        + c2 * (ax * by - ay * bx)
    )
    return det.sign()


def triangulate_polygon(pts: list[Vec2]) -> list[tuple[int, int, int]]:
    """Ear clipping with exact predicates; returns CCW index triples."""
    n = len(pts)
    idx = list(range(n))
    triangles = []
    guard = 0
    while len(idx) > 3:
        guard += 1
        if guard > 4 * n * n:  # pragma: no cover
            raise SurfaceError("ear clipping failed to converge")
        found = False
        for k in range(len(idx)):
            i0 = idx[(k - 1) % len(idx)]
            i1 = idx[k]
            i2 = idx[(k + 1) % len(idx)]
            a, b, c = pts[i0], pts[i1], pts[i2]
            if (b - a).cross(c - b).sign() <= 0:
                continue
            blocked = False
            for j in idx:
                if j in (i0, i1, i2):
                    continue
                if _point_in_closed_triangle(a, b, c, pts[j]):
                    blocked = True
                    break
            if not blocked:
                triangles.append((i0, i1, i2))
                idx.pop(k)
                found = True
                break
        if not found:  # pragma: no cover
            raise SurfaceError("no ear found; polygon not simple?")
    triangles.append(tuple(idx))
    return triangles


def _point_in_closed_triangle(a: Vec2, b: Vec2, c: Vec2, p: Vec2) -> bool:
    s1 = (b - a).cross(p - a).sign()
    s2 = (c - b).cross(p - b).sign()
    s3 = (a - c).cross(p - c).sign()
    return s1 >= 0 and s2 >= 0 and s3 >= 0


@dataclass
class TriSurface:
    """Triangulated translation surface in edge-vector form.

    Triangle i has slot vectors vecs[i][0..2] summing to zero (CCW);
    ``glue`` is an involution on slots with opposite vectors.  Marked points
    are stored per triangle as offsets from the triangle's corner 0.
    """

    d: int
    vecs: list[list[Vec2]]
    glue: dict[Slot, Slot]
    marked: dict[str, tuple[int, Vec2]] = field(default_factory=dict)

    @classmethod
    def from_surface(cls, s: TranslationSurface) -> "TriSurface":
        vecs: list[list[Vec2]] = []
        glue: dict[Slot, Slot] = {}
        boundary_slot: dict[tuple[int, int], Slot] = {}
        tri_origin: list[tuple[int, Vec2]] = []  # (polygon, corner-0 position)

        for p, poly in enumerate(s.polygons):
            pts = list(poly)
            for (i0, i1, i2) in triangulate_polygon(pts):
                ti = len(vecs)
                vecs.append([pts[i1] - pts[i0], pts[i2] - pts[i1], pts[i0] - pts[i2]])
                tri_origin.append((p, pts[i0]))
                corners = (i0, i1, i2)
                n = len(pts)
                for e in range(3):
                    u, v = corners[e], corners[(e + 1) % 3]
                    if (u + 1) % n == v:
                        boundary_slot[(p, u)] = (ti, e)
                    else:
                        # Interior diagonal: glue to its reverse when seen.
                        key = ("diag", p, frozenset((u, v)))
                        if key in glue:
                            other = glue.pop(key)
                            glue[(ti, e)] = other
                            glue[other] = (ti, e)
                        else:
                            glue[key] = (ti, e)

        leftovers = [k for k in glue if not isinstance(k[0], int)]
        if leftovers:  # pragma: no cover
            raise SurfaceError(f"unmatched diagonals {leftovers}")

        for (p, e), slot in boundary_slot.items():
            q, f = s.gluings[(p, e)]
            other = boundary_slot[(q, f)]
            glue[slot] = other
            glue[other] = slot

        marked: dict[str, tuple[int, Vec2]] = {}
        for label, (p, pos) in s.marked_points.items():
            home = None
            for ti, (tp, origin) in enumerate(tri_origin):
                if tp != p:
                    continue
                a = origin
                b = a + vecs[ti][0]
                c = b + vecs[ti][1]
                if _point_in_closed_triangle(a, b, c, pos):
                    home = (ti, pos - a)
                    break
            if home is None:  # pragma: no cover
                raise SurfaceError(f"marked point {label} not in any triangle")
            marked[label] = home
        return cls(s.d, vecs, glue, marked)

    # -- geometry of one glued edge ---------------------------------------

    def _quad(self, slot: Slot):
        """Developed quad around the glued edge: returns (points, slots).

        Points X0, X1, X2, X3 with triangle(slot) = (X0, X1, X2) CCW and the
        partner's apex at X3; slots (a, a1, a2, b, b1, b2).
        """
        a = slot
        b = self.glue[a]
        ti, e = a
        tj, f = b
        u = self.vecs[ti][e]
        p = self.vecs[ti][(e + 1) % 3]
        r = self.vecs[tj][(f + 1) % 3]
        x0 = _zero(self.d)
        x1 = u
        x2 = u + p
        # Partner triangle (slots b, b1, b2; vectors -u, r, s) develops with
        # Y0 = X1, Y1 = X0, so its apex is Y2 = X0 + r.
        x3 = x0 + r
        return (x0, x1, x2, x3), (
            a,
            (ti, (e + 1) % 3),
            (ti, (e + 2) % 3),
            b,
            (tj, (f + 1) % 3),
            (tj, (f + 2) % 3),
        )

    def edge_delaunay_sign(self, slot: Slot) -> int:
        """+1 when the edge violates Delaunay (flip needed), 0 cocircular."""
        (x0, x1, x2, x3), _ = self._quad(slot)
        return _incircle(x0, x1, x2, x3)

    def flip(self, slot: Slot):
        (x0, x1, x2, x3), (a, a1, a2, b, b1, b2) = self._quad(slot)
        ti = a[0]
        tj = b[0]
        p = self.vecs[a1[0]][a1[1]]
        q = self.vecs[a2[0]][a2[1]]
        r = self.vecs[b1[0]][b1[1]]
        s_vec = self.vecs[b2[0]][b2[1]]
        w = q + r  # new diagonal X2 -> X3

        ext = {}
        for old in (a1, a2, b1, b2):
            ext[old] = self.glue[old]

        # New triangles: A' = (w, s, p) at index ti, B' = (-w, q, r) at tj.
        self.vecs[ti] = [w, s_vec, p]
        self.vecs[tj] = [-w, q, r]
        new_pos = {a2: (tj, 1), b1: (tj, 2), b2: (ti, 1), a1: (ti, 2)}

        def resolve(old_slot):
            return new_pos.get(old_slot, old_slot)

        for old, partner in ext.items():
            ns = resolve(old)
            np_ = resolve(partner)
            self.glue[ns] = np_
            self.glue[np_] = ns
        self.glue[(ti, 0)] = (tj, 0)
        self.glue[(tj, 0)] = (ti, 0)

        # Relocate marked points living in the two flipped triangles.
        # Old charts: A = (X0, X1, X2) anchored at X0; B = (Y0=X1, Y1=X0, Y2=X3)
        # anchored at Y0 = X1.  New charts: A' = (X2, X3, X1) anchored at X2;
        # B' = (X3, X2, X0) anchored at X3.
        for label, (t, off) in list(self.marked.items()):
            if t == ti:
                pos = x0 + off
            elif t == tj:
                pos = x1 + off
            else:
                continue
            in_a = _point_in_closed_triangle(x2, x3, x1, pos)
            if in_a:
                self.marked[label] = (ti, pos - x2)
            else:
                if not _point_in_closed_triangle(x3, x2, x0, pos):  # pragma: no cover
                    raise SurfaceError(f"lost marked point {label} during flip")
                self.marked[label] = (tj, pos - x3)

    def delaunay(self, max_flips: int = 20_000):
        """Flip to the Delaunay condition (no edge with positive incircle)."""
        flips = 0
        while True:
            dirty = False
            for ti in range(len(self.vecs)):
                for e in range(3):
                    slot = (ti, e)
                    if self.glue[slot] < slot:
                        continue
                    if self.edge_delaunay_sign(slot) > 0:
                        self.flip(slot)
                        flips += 1
                        if flips > max_flips:
                            raise BudgetExceeded("Delaunay flip budget exhausted")
                        dirty = True
            if not dirty:
                return self

    def check(self):
        for ti, vs in enumerate(self.vecs):
            if not (vs[0] + vs[1] + vs[2]).is_zero():
                raise SurfaceError(f"triangle {ti} does not close")
            if vs[0].cross(vs[1]).sign() <= 0:
                raise SurfaceError(f"triangle {ti} not positively oriented")
        for slot, other in self.glue.items():
            if self.glue[other] != slot:
                raise SurfaceError("gluing not involutive")
            if not (self.vecs[slot[0]][slot[1]] + self.vecs[other[0]][other[1]]).is_zero():
                raise SurfaceError("glued slots not opposite")
        return self


def _vec_from_key(key: tuple, d: int) -> Vec2:
    xa, xb, ya, yb = key
    return Vec2(QuadExt(xa, xb, d), QuadExt(ya, yb, d))


@dataclass
class CellComplex:
    """Canonical Delaunay cells: convex polygons with glued boundary edges."""

    d: int
    cells: list[list[Vec2]]  # per cell, CCW boundary edge vectors
    glue: dict[tuple[int, int], tuple[int, int]]
    # Marked point representatives: label -> set of (cell, offset key) with
    # offsets from the tail of the cell's edge 0; points on a cell-boundary
    # edge carry a representative on both sides.
    marked: dict[str, set]


def build_cells(tri: TriSurface) -> CellComplex:
    """Merge cocircular triangles into maximal convex cells."""
    degenerate: set[Slot] = set()
    for slot, other in tri.glue.items():
        if other < slot:
            continue
        if tri.edge_delaunay_sign(slot) == 0:
            degenerate.add(slot)
            degenerate.add(other)

    # Union triangles across degenerate edges.
    parent = list(range(len(tri.vecs)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for slot in degenerate:
        a, b = slot[0], tri.glue[slot][0]
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    groups: dict[int, list[int]] = {}
    for t in range(len(tri.vecs)):
        groups.setdefault(find(t), []).append(t)

    cells: list[list[Vec2]] = []
    glue: dict[tuple[int, int], tuple[int, int]] = {}
    slot_to_cell_edge: dict[Slot, tuple[int, int]] = {}
    marked: dict[str, set] = {label: set() for label in tri.marked}

    cell_infos = []
    for root, members in sorted(groups.items()):
        ci = len(cell_infos)
        # Develop member triangles in the plane.
        placement: dict[int, Vec2] = {members[0]: _zero(tri.d)}
        stack = [members[0]]
        corner_pos: dict[tuple[int, int], Vec2] = {}
        while stack:
            t = stack.pop()
            base = placement[t]
            pos = base
            for e in range(3):
                corner_pos[(t, e)] = pos
                pos = pos + tri.vecs[t][e]
            for e in range(3):
                slot = (t, e)
                if slot not in degenerate:
                    continue
                other = tri.glue[slot]
                t2 = other[0]
                if t2 in placement:
                    continue
                # Partner triangle placed so the shared edge coincides:
                # other slot's tail sits at this slot's head.
                head = corner_pos[(t, (e + 1) % 3)]
                # Walk back from the partner slot to its corner 0.
                off = _zero(tri.d)
                for k in range(other[1]):
                    off = off + tri.vecs[t2][k]
                placement[t2] = head - off
                stack.append(t2)

        boundary = []
        for t in members:
            for e in range(3):
                slot = (t, e)
                if slot not in degenerate:
                    tail = corner_pos[(t, e)]
                    boundary.append((slot, tail, tail + tri.vecs[t][e]))
        # Chain boundary edges tail-to-head.
        by_tail = {b[1].key(): b for b in boundary}
        if len(by_tail) != len(boundary):  # pragma: no cover
            raise SurfaceError("cell boundary has repeated corners")
        start = min(by_tail)  # deterministic anchor
        chain = []
        cur = by_tail[start]
        for _ in range(len(boundary)):
            chain.append(cur)
            cur = by_tail[cur[2].key()]
        if cur is not chain[0]:  # pragma: no cover
            raise SurfaceError("cell boundary did not close")
        cell_infos.append((members, placement, chain))

    edge_tails: list[list[Vec2]] = []
    for ci, (members, placement, chain) in enumerate(cell_infos):
        vectors = []
        tails = []
        anchor = chain[0][1]
        for ei, (slot, tail, head) in enumerate(chain):
            vectors.append(head - tail)
            tails.append(tail - anchor)
            slot_to_cell_edge[slot] = (ci, ei)
        cells.append(vectors)
        edge_tails.append(tails)
        for label, (t, off) in tri.marked.items():
            if t in members:
                pos = placement[t] + off
                marked[label].add((ci, (pos - anchor).key()))

    for slot, ce in slot_to_cell_edge.items():
        other = tri.glue[slot]
        glue[ce] = slot_to_cell_edge[other]

    # A marked point on a cell-boundary edge gets a second representative on
    # the glued side, so isomorphic complexes carry identical rep sets.
    for label in list(marked):
        extra = set()
        for (ci, relkey) in marked[label]:
            rel = _vec_from_key(relkey, tri.d)
            for ei, vec in enumerate(cells[ci]):
                tail = edge_tails[ci][ei]
                if geom.on_segment(tail, tail + vec, rel):
                    t_num = vec.dot(rel - tail)
                    t_den = vec.norm2()
                    cj, ej = glue[(ci, ei)]
                    tail_j = edge_tails[cj][ej]
                    vec_j = cells[cj][ej]
                    # Parameter reverses across the gluing.
                    rel_j = tail_j + vec_j * ((t_den - t_num) / t_den)
                    extra.add((cj, rel_j.key()))
        marked[label] |= extra

    return CellComplex(tri.d, cells, glue, marked)


def _zero(d: int) -> Vec2:
    return Vec2(QuadExt(0, 0, d), QuadExt(0, 0, d))


def to_surface(tri: TriSurface) -> TranslationSurface:
    """Reconstitute a polygon surface from the triangulated form.

    Each triangle is anchored with corner 0 at the origin of its own chart;
    gluings stay translations because glued slots carry opposite vectors.
    """
    polys = []
    for vs in tri.vecs:
        z = _zero(tri.d)
        polys.append([z, vs[0], vs[0] + vs[1]])
    pairs = [(a, b) for a, b in tri.glue.items() if a < b]
    marked = {label: (t, off) for label, (t, off) in tri.marked.items()}
    return TranslationSurface(tri.d, polys, pairs, marked)


def delaunay_surface(
    s: TranslationSurface, extra_points: Optional[dict] = None
) -> tuple[TranslationSurface, dict]:
    """Delaunay-retriangulated copy of s, as a new polygon surface.

    ``extra_points`` maps labels to (polygon, position) pairs carried through
    the flips like marked points but returned separately (they may lie on
    edges of the result, which marked points of a surface must not).
    Returns (surface, extra_positions).
    """
    reserved = {}
    if extra_points:
        combined = dict(s.marked_points)
        for label, loc in extra_points.items():
            combined[f"@x:{label}"] = loc
        s = TranslationSurface(
            s.d, s.polygons, s._gluing_pairs(), combined, s.marked_vertices
        )
    tri = TriSurface.from_surface(s)
    tri.delaunay()
    tri.check()
    out = to_surface(tri)
    if extra_points:
        keep = {}
        for label, loc in out.marked_points.items():
            if label.startswith("@x:"):
                reserved[label[3:]] = loc
            else:
                keep[label] = loc
        out = TranslationSurface(
            out.d, out.polygons, out._gluing_pairs(), keep, out.marked_vertices
        )
    for label, (p, pos) in out.marked_points.items():
        kind, _ = out.locate_in_polygon(p, pos)
        if kind != "interior":
            raise SurfaceError(
                f"marked point {label} landed on the Delaunay 1-skeleton"
            )
    return out, reserved


def canonical_cells(s: TranslationSurface, respect_marked: bool = True) -> CellComplex:
    tri = TriSurface.from_surface(s)
    if not respect_marked:
        tri.marked = {}
    tri.delaunay()
    tri.check()
    return build_cells(tri)


def cell_iso(x: CellComplex, y: CellComplex) -> Optional[dict[int, tuple[int, int]]]:
    """Find a translation isomorphism: cell i of x -> (cell j of y, edge shift).

    Cells correspond with a cyclic rotation of boundary edges; edge vectors
    must match exactly and gluings must be equivariant; marked-point
    representative sets must correspond.
    """
    if len(x.cells) != len(y.cells):
        return None

    def try_seed(cx: int, cy: int, shift: int) -> Optional[dict]:
        nx = len(x.cells[cx])
        if nx != len(y.cells[cy]):
            return None
        for k in range(nx):
            if x.cells[cx][k] != y.cells[cy][(k + shift) % nx]:
                return None
        mapping = {cx: (cy, shift)}
        stack = [cx]
        while stack:
            c = stack.pop()
            cy_, sh = mapping[c]
            n = len(x.cells[c])
            for e in range(n):
                xe = (c, e)
                ye = (cy_, (e + sh) % n)
                xg = x.glue[xe]
                yg = y.glue[ye]
                c2, e2 = xg
                d2, f2 = yg
                n2 = len(x.cells[c2])
                if len(y.cells[d2]) != n2:
                    return None
                want_shift = (f2 - e2) % n2
                if c2 in mapping:
                    if mapping[c2] != (d2, want_shift):
                        return None
                else:
                    for k in range(n2):
                        if x.cells[c2][k] != y.cells[d2][(k + want_shift) % n2]:
                            return None
                    mapping[c2] = (d2, want_shift)
                    stack.append(c2)
        if len(mapping) != len(x.cells):
            return None
        return mapping

    def marked_ok(mapping) -> bool:
        if set(x.marked) != set(y.marked):
            return False
        # Markings are matched setwise (labels may be permuted): the mapped
        # set of x representatives must equal the union of y's.
        y_all = set()
        for reps in y.marked.values():
            y_all |= reps
        x_mapped = set()
        for label, reps in x.marked.items():
            for (ci, relkey) in reps:
                cy_, sh = mapping[ci]
                rel = _vec_from_key(relkey, x.d)
                # x's anchor (tail of edge 0) sits at the tail of y's edge
                # ``sh``, i.e. at the partial sum of y's boundary vectors.
                off = _zero(x.d)
                for k in range(sh):
                    off = off + y.cells[cy_][k]
                pos = off + rel
                x_mapped.add((cy_, pos.key()))
        return x_mapped == y_all

    for cy in range(len(y.cells)):
        for shift in range(len(y.cells[cy])):
            m = try_seed(0, cy, shift)
            if m is not None and marked_ok(m):
                return m
    return None
